#include "symcap/standard_symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace symcap {

PhaseVector PhaseVector::from_values(std::vector<double> values) {
  for (double v : values) {
    if (!(v >= 0.0 && v < 1.0)) throw Error("phase entries must lie in [0, 1)");
  }
  PhaseVector p;
  p.exact.assign(values.size(), std::nullopt);
  p.values = std::move(values);
  return p;
}

PhaseVector PhaseVector::from_rationals(const std::vector<Rational>& values) {
  PhaseVector p;
  for (const auto& r : values) {
    if (r.den <= 0 || r.num < 0 || r.num >= r.den) {
      throw Error("rational phase must satisfy 0 <= num < den");
    }
    p.values.push_back(static_cast<double>(r.num) / static_cast<double>(r.den));
    p.exact.emplace_back(r);
  }
  return p;
}

namespace {

struct Candidate {
  std::vector<std::int64_t> q;  // q_0..q_N
  double residual;
};

std::int64_t max_abs(const std::vector<std::int64_t>& q) {
  std::int64_t m = 0;
  for (auto v : q) m = std::max<std::int64_t>(m, std::abs(v));
  return m;
}

std::int64_t l1(const std::vector<std::int64_t>& q) {
  std::int64_t s = 0;
  for (auto v : q) s += std::abs(v);
  return s;
}

bool better(const Candidate& a, const Candidate& b) {
  const auto ma = max_abs(a.q), mb = max_abs(b.q);
  if (ma != mb) return ma < mb;
  const auto la = l1(a.q), lb = l1(b.q);
  if (la != lb) return la < lb;
  return a.residual < b.residual;
}

// Exact check of q_0 + sum_j q_j num_j/den_j == 0 using 128-bit accumulation.
bool exact_relation_holds(const std::vector<std::int64_t>& q, const PhaseVector& p) {
  __int128 lcm = 1;
  for (const auto& r : p.exact) {
    const __int128 d = r->den;
    __int128 a = lcm, b = d;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    lcm = lcm / a * d;
    if (lcm > (static_cast<__int128>(1) << 100)) return false;
  }
  __int128 total = static_cast<__int128>(q[0]) * lcm;
  for (std::size_t j = 0; j < p.exact.size(); ++j) {
    total += static_cast<__int128>(q[j + 1]) * p.exact[j]->num * (lcm / p.exact[j]->den);
  }
  return total == 0;
}

// Enumerates [-r, r]^k; calls f(vector, sum of q_j theta_j).
template <class F>
void enumerate_box(const std::vector<double>& theta, int r, F&& f) {
  const std::size_t k = theta.size();
  std::vector<std::int64_t> q(k, -r);
  if (k == 0) {
    f(q, 0.0);
    return;
  }
  while (true) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += static_cast<double>(q[j]) * theta[j];
    f(q, s);
    std::size_t j = 0;
    while (j < k && q[j] == r) {
      q[j] = -r;
      ++j;
    }
    if (j == k) break;
    ++q[j];
  }
}

double frac(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;
  return f;
}

// Meet-in-the-middle search over |q_j| <= r for j >= 1, q_0 solved and bounded by `bound`.
std::optional<Candidate> search_level(const PhaseVector& p, int r, int bound, double tol,
                                      bool exact) {
  const std::size_t n = p.size();
  const std::size_t k = n / 2;
  const std::vector<double> left(p.values.begin(), p.values.begin() + k);
  const std::vector<double> right(p.values.begin() + k, p.values.end());

  struct Entry {
    double key;
    double sum;
    std::vector<std::int64_t> q;
  };
  std::vector<Entry> table;
  enumerate_box(left, r, [&](const std::vector<std::int64_t>& q, double s) {
    table.push_back({frac(s), s, q});
  });
  std::sort(table.begin(), table.end(), [](const Entry& a, const Entry& b) { return a.key < b.key; });
  std::vector<double> keys(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) keys[i] = table[i].key;

  std::optional<Candidate> best;
  std::size_t evaluations = 0;
  constexpr std::size_t kMaxEvaluations = 20'000'000;

  auto consider = [&](const Entry& a, const std::vector<std::int64_t>& qb, double sb) {
    ++evaluations;
    const double s = a.sum + sb;
    const double q0 = -std::round(s);
    if (std::abs(q0) > bound) return;
    const double residual = std::abs(s + q0);
    if (residual > tol) return;
    Candidate c;
    c.q.reserve(n + 1);
    c.q.push_back(static_cast<std::int64_t>(q0));
    c.q.insert(c.q.end(), a.q.begin(), a.q.end());
    c.q.insert(c.q.end(), qb.begin(), qb.end());
    bool nonzero = false;
    for (std::size_t j = 1; j < c.q.size(); ++j) nonzero = nonzero || c.q[j] != 0;
    if (!nonzero) return;  // q_0 alone can never vanish
    if (exact && !exact_relation_holds(c.q, p)) return;
    c.residual = exact ? 0.0 : residual;
    if (!best || better(c, *best)) best = std::move(c);
  };

  enumerate_box(right, r, [&](const std::vector<std::int64_t>& qb, double sb) {
    if (evaluations > kMaxEvaluations) return;
    const double target = frac(-sb);
    // Keys within tol of target on the circle [0, 1).
    auto scan = [&](double lo, double hi) {
      auto it = std::lower_bound(keys.begin(), keys.end(), lo);
      for (; it != keys.end() && *it <= hi; ++it) {
        consider(table[static_cast<std::size_t>(it - keys.begin())], qb, sb);
      }
    };
    scan(target - tol, target + tol);
    if (target - tol < 0.0) scan(target - tol + 1.0, 1.0);
    if (target + tol >= 1.0) scan(0.0, target + tol - 1.0);
  });
  return best;
}

}  // namespace

IndependenceVerdict rational_independence(const PhaseVector& phases, int denominator_bound,
                                          double tol) {
  if (denominator_bound < 1) throw Error("rational_independence: bound must be >= 1");
  if (phases.values.size() != phases.exact.size()) {
    throw Error("rational_independence: malformed phase vector");
  }
  IndependenceVerdict verdict;
  verdict.bound = denominator_bound;
  verdict.exact = !phases.exact.empty() &&
                  std::all_of(phases.exact.begin(), phases.exact.end(),
                              [](const auto& r) { return r.has_value(); });
  if (phases.size() == 0) {
    verdict.independent = true;
    return verdict;
  }
  const double search_tol = verdict.exact ? std::max(tol, 1e-12) : tol;

  // Growing boxes find the small relations of degenerate inputs cheaply.
  for (int r = 1;; r = std::min(2 * r, denominator_bound)) {
    if (auto found = search_level(phases, r, denominator_bound, search_tol, verdict.exact)) {
      // Report the sign with a positive leading phase coefficient.
      for (std::size_t j = 1; j < found->q.size(); ++j) {
        if (found->q[j] == 0) continue;
        if (found->q[j] < 0) {
          for (auto& x : found->q) x = -x;
        }
        break;
      }
      verdict.independent = false;
      verdict.relation = std::move(found->q);
      verdict.residual = found->residual;
      return verdict;
    }
    if (r == denominator_bound) break;
  }
  if (verdict.exact) {
    // Every rational phase num/den satisfies den * theta - num = 0, whatever the bound.
    const Rational& r = *phases.exact.front();
    verdict.independent = false;
    verdict.relation.assign(phases.size() + 1, 0);
    verdict.relation[0] = -r.num;
    verdict.relation[1] = r.den;
    verdict.residual = 0.0;
    return verdict;
  }
  verdict.independent = true;
  return verdict;
}

// ---------------------------------------------------------------------------------------------

UnitaryEigendecomposition unitary_eigendecomposition(const UnitaryMatrix& v) {
  const int n = v.dim();
  Eigen::ComplexSchur<ComplexMatrix> schur(v.matrix());
  const ComplexMatrix& u = schur.matrixU();
  const ComplexMatrix& t = schur.matrixT();

  std::vector<double> theta(n);
  for (int j = 0; j < n; ++j) {
    double phase = std::arg(t(j, j)) / (2.0 * std::numbers::pi);
    if (phase < 0.0) phase += 1.0;
    if (phase >= 1.0) phase = 0.0;
    theta[j] = phase;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return theta[a] < theta[b]; });

  ComplexMatrix w(n, n);
  std::vector<double> sorted(n);
  for (int k = 0; k < n; ++k) {
    ComplexVector col = u.col(order[k]);
    Eigen::Index arg_max = 0;
    col.cwiseAbs().maxCoeff(&arg_max);
    const Complex pivot = col(arg_max);
    col *= std::conj(pivot) / std::abs(pivot);
    w.col(k) = col;
    sorted[k] = theta[order[k]];
  }
  return {UnitaryMatrix(w), PhaseVector::from_values(std::move(sorted))};
}

double default_entry_tol(int n) { return 1e-8 * std::sqrt(static_cast<double>(n)); }

namespace {

std::string relation_string(const std::vector<std::int64_t>& q) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < q.size(); ++i) os << (i ? ", " : "") << q[i];
  os << ")";
  return os.str();
}

}  // namespace

SymmetryGroup closure_of_standard_symmetry(const UnitaryMatrix& v, int denominator_bound,
                                           double tol) {
  const auto eig = unitary_eigendecomposition(v);
  const auto verdict = rational_independence(eig.phases, denominator_bound, tol);
  if (!verdict.independent) {
    throw Error("not a standard symmetry: phases satisfy the integer relation " +
                relation_string(verdict.relation));
  }
  return SymmetryGroup::conjugated_torus(eig.basis);
}

TwoSymmetryReport check_two_symmetry_condition(const UnitaryMatrix& v1, const UnitaryMatrix& v2,
                                               std::optional<double> entry_tol,
                                               int denominator_bound, double tol) {
  if (v1.dim() != v2.dim()) throw DimensionError("check_two_symmetry_condition: dimension mismatch");
  TwoSymmetryReport report;
  report.entry_tol = entry_tol.value_or(default_entry_tol(v1.dim()));
  const auto e1 = unitary_eigendecomposition(v1);
  const auto e2 = unitary_eigendecomposition(v2);
  report.first = rational_independence(e1.phases, denominator_bound, tol);
  report.second = rational_independence(e2.phases, denominator_bound, tol);
  report.overlap = e1.basis.adjoint() * e2.basis.matrix();
  report.min_overlap_entry = report.overlap.cwiseAbs().minCoeff();

  if (!report.first.independent) {
    report.reason = "V1 is not a standard symmetry: relation " + relation_string(report.first.relation);
  } else if (!report.second.independent) {
    report.reason = "V2 is not a standard symmetry: relation " + relation_string(report.second.relation);
  } else if (report.min_overlap_entry <= report.entry_tol) {
    std::ostringstream os;
    os.precision(3);
    os << "W1* W2 has an entry of modulus " << report.min_overlap_entry << " <= " << report.entry_tol;
    report.reason = os.str();
  } else {
    report.isotropic_optimal = true;
  }
  return report;
}

ReducedSet intersect_torus_fixed_sets(const UnitaryMatrix& w1, const UnitaryMatrix& w2,
                                      std::optional<double> entry_tol) {
  if (w1.dim() != w2.dim()) throw DimensionError("intersect_torus_fixed_sets: dimension mismatch");
  const int n = w1.dim();
  const double tol = entry_tol.value_or(default_entry_tol(n));
  const ComplexMatrix w = w1.adjoint() * w2.matrix();

  // Nodes 0..n-1 are rows (entries of E1), n..2n-1 are columns (entries of E2).
  std::vector<int> parent(2 * n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(w(i, j)) > tol) parent[find(i)] = find(n + j);
    }
  }
  // Group rows by component, in order of first appearance.
  std::vector<int> component_of_row(n);
  std::vector<int> roots;
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    auto it = std::find(roots.begin(), roots.end(), root);
    if (it == roots.end()) {
      roots.push_back(root);
      it = roots.end() - 1;
    }
    component_of_row[i] = static_cast<int>(it - roots.begin());
  }
  if (roots.size() == 1) return ReducedSet::singleton(CovarianceMatrix::isotropic(n));

  // Reorder W1's columns so each component is contiguous.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return component_of_row[a] < component_of_row[b]; });
  ComplexMatrix basis(n, n);
  for (int k = 0; k < n; ++k) basis.col(k) = w1.matrix().col(order[k]);
  const UnitaryMatrix reordered(basis);

  if (static_cast<int>(roots.size()) == n) return ReducedSet::conjugated_simplex(reordered);
  std::vector<ReducedSet> blocks;
  for (std::size_t c = 0; c < roots.size(); ++c) {
    const int size = static_cast<int>(
        std::count(component_of_row.begin(), component_of_row.end(), static_cast<int>(c)));
    blocks.push_back(ReducedSet::singleton(CovarianceMatrix::isotropic(size)));
  }
  return ReducedSet::conjugated(reordered, ReducedSet::weighted_direct_sum(std::move(blocks)));
}

}  // namespace symcap
