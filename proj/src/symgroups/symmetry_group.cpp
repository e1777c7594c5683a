#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "symcap/symgroups.hpp"

namespace symcap {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(int n, const char* what) {
  if (n <= 0) throw DimensionError(std::string(what) + ": dimension must be >= 1");
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).norm() <= tol;
}

bool contains_element(const std::vector<UnitaryMatrix>& set, const ComplexMatrix& v, double tol) {
  return std::any_of(set.begin(), set.end(),
                     [&](const UnitaryMatrix& u) { return approx_equal(u.matrix(), v, tol); });
}

// Each row and column has exactly one entry of modulus one, all others vanish.
bool is_monomial(const ComplexMatrix& v, double tol, bool require_signs, bool require_ones) {
  const Eigen::Index n = v.rows();
  if (v.cols() != n) return false;
  std::vector<int> column_hits(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    int hits = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex z = v(i, j);
      if (std::abs(z) <= tol) continue;
      if (std::abs(std::abs(z) - 1.0) > tol) return false;
      if (require_signs && std::abs(z.imag()) > tol) return false;
      if (require_ones && std::abs(z - Complex(1.0, 0.0)) > tol) return false;
      ++hits;
      ++column_hits[j];
    }
    if (hits != 1) return false;
  }
  return std::all_of(column_hits.begin(), column_hits.end(), [](int h) { return h == 1; });
}

bool is_diagonal(const ComplexMatrix& v, double tol) {
  return (v - diagonal_part(v)).norm() <= tol;
}

ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    out.block(offset, offset, b.rows(), b.cols()) = b;
    offset += b.rows();
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------------------------

SymmetryGroup SymmetryGroup::full_unitary(int n) {
  require_positive(n, "full_unitary");
  return SymmetryGroup(group::FullUnitary{n});
}

SymmetryGroup SymmetryGroup::conjugated_torus(const UnitaryMatrix& basis) {
  return SymmetryGroup(group::ConjugatedTorus{basis});
}

SymmetryGroup SymmetryGroup::diagonal_torus(int n) {
  require_positive(n, "diagonal_torus");
  return conjugated_torus(UnitaryMatrix::identity(n));
}

SymmetryGroup SymmetryGroup::permutations(int n) {
  require_positive(n, "permutations");
  return SymmetryGroup(group::Permutations{n});
}

SymmetryGroup SymmetryGroup::sign_flips(int n) {
  require_positive(n, "sign_flips");
  return SymmetryGroup(group::SignFlips{n});
}

SymmetryGroup SymmetryGroup::signed_permutations(int n) {
  require_positive(n, "signed_permutations");
  return SymmetryGroup(group::SignedPermutations{n});
}

SymmetryGroup SymmetryGroup::finite(std::vector<UnitaryMatrix> elements,
                                    group::Semantics semantics) {
  if (elements.empty()) throw Error("finite multiset must have at least one element");
  const int n = elements.front().dim();
  for (const auto& e : elements) {
    if (e.dim() != n) throw DimensionError("finite multiset elements must share one dimension");
  }
  if (semantics == group::Semantics::kGroup) {
    constexpr double kClosureTol = 1e-10;
    for (const auto& a : elements) {
      if (!contains_element(elements, a.adjoint(), kClosureTol)) {
        throw Error("finite group is not closed under inverses");
      }
      for (const auto& b : elements) {
        if (!contains_element(elements, a.matrix() * b.matrix(), kClosureTol)) {
          throw Error("finite group is not closed under products");
        }
      }
    }
  }
  return SymmetryGroup(group::FiniteMultiset{std::move(elements), semantics});
}

SymmetryGroup SymmetryGroup::tensor(SymmetryGroup first, SymmetryGroup second) {
  return SymmetryGroup(group::TensorProduct{std::make_shared<const SymmetryGroup>(std::move(first)),
                                            std::make_shared<const SymmetryGroup>(std::move(second))});
}

SymmetryGroup SymmetryGroup::direct_sum(std::vector<SymmetryGroup> parts) {
  if (parts.empty()) throw Error("direct sum needs at least one part");
  return SymmetryGroup(group::DirectSum{std::move(parts)});
}

SymmetryGroup SymmetryGroup::conjugated(const UnitaryMatrix& basis, SymmetryGroup inner) {
  if (basis.dim() != inner.dim()) throw DimensionError("conjugated group: basis/group mismatch");
  return SymmetryGroup(
      group::Conjugated{basis, std::make_shared<const SymmetryGroup>(std::move(inner))});
}

SymmetryGroup SymmetryGroup::trivial(int n) {
  require_positive(n, "trivial");
  return SymmetryGroup(group::Trivial{n});
}

int SymmetryGroup::dim() const {
  return std::visit(
      Overloaded{
          [](const group::FullUnitary& g) { return g.n; },
          [](const group::ConjugatedTorus& g) { return g.basis.dim(); },
          [](const group::Permutations& g) { return g.n; },
          [](const group::SignFlips& g) { return g.n; },
          [](const group::SignedPermutations& g) { return g.n; },
          [](const group::FiniteMultiset& g) { return g.elements.front().dim(); },
          [](const group::TensorProduct& g) { return g.first->dim() * g.second->dim(); },
          [](const group::DirectSum& g) {
            return std::accumulate(g.parts.begin(), g.parts.end(), 0,
                                   [](int acc, const SymmetryGroup& p) { return acc + p.dim(); });
          },
          [](const group::Conjugated& g) { return g.basis.dim(); },
          [](const group::Trivial& g) { return g.n; },
      },
      v_);
}

bool SymmetryGroup::is_group() const {
  return std::visit(
      Overloaded{
          [](const group::FiniteMultiset& g) { return g.semantics == group::Semantics::kGroup; },
          [](const group::TensorProduct& g) { return g.first->is_group() && g.second->is_group(); },
          [](const group::DirectSum& g) {
            return std::all_of(g.parts.begin(), g.parts.end(),
                               [](const SymmetryGroup& p) { return p.is_group(); });
          },
          [](const group::Conjugated& g) { return g.inner->is_group(); },
          [](const auto&) { return true; },
      },
      v_);
}

std::string SymmetryGroup::describe() const {
  return std::visit(
      Overloaded{
          [](const group::FullUnitary& g) { return "full_unitary(" + std::to_string(g.n) + ")"; },
          [](const group::ConjugatedTorus& g) {
            return "conjugated_torus(W, n=" + std::to_string(g.basis.dim()) + ")";
          },
          [](const group::Permutations& g) { return "permutations(" + std::to_string(g.n) + ")"; },
          [](const group::SignFlips& g) { return "sign_flips(" + std::to_string(g.n) + ")"; },
          [](const group::SignedPermutations& g) {
            return "signed_permutations(" + std::to_string(g.n) + ")";
          },
          [](const group::FiniteMultiset& g) {
            return std::string(g.semantics == group::Semantics::kGroup ? "finite_group"
                                                                       : "finite_multiset") +
                   "(" + std::to_string(g.elements.size()) + " elements)";
          },
          [](const group::TensorProduct& g) {
            return "tensor(" + g.first->describe() + ", " + g.second->describe() + ")";
          },
          [](const group::DirectSum& g) {
            std::string out = "direct_sum(";
            for (std::size_t k = 0; k < g.parts.size(); ++k) {
              if (k) out += ", ";
              out += g.parts[k].describe();
            }
            return out + ")";
          },
          [](const group::Conjugated& g) { return "conjugated(W, " + g.inner->describe() + ")"; },
          [](const group::Trivial& g) { return "trivial(" + std::to_string(g.n) + ")"; },
      },
      v_);
}

// ---------------------------------------------------------------------------------------------

namespace {

ComplexMatrix random_permutation_matrix(int n, RandomStream& rng) {
  std::vector<int> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::shuffle(pi.begin(), pi.end(), rng.engine());
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) p(i, pi[i]) = 1.0;
  return p;
}

ComplexMatrix random_signs(int n, RandomStream& rng) {
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) s(i, i) = rng.coin() ? 1.0 : -1.0;
  return s;
}

ComplexMatrix haar_unitary(int n, RandomStream& rng) {
  const ComplexMatrix z = complex_gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    q.col(k) *= (mag > 0.0 ? d / mag : Complex(1.0, 0.0));
  }
  return q;
}

ComplexMatrix sample_matrix(const SymmetryGroup& g, RandomStream& rng) {
  return std::visit(
      Overloaded{
          [&](const group::FullUnitary& v) -> ComplexMatrix { return haar_unitary(v.n, rng); },
          [&](const group::ConjugatedTorus& v) -> ComplexMatrix {
            const int n = v.basis.dim();
            ComplexVector u(n);
            for (int i = 0; i < n; ++i) u(i) = rng.unit_phase();
            return v.basis.matrix() * u.asDiagonal() * v.basis.adjoint();
          },
          [&](const group::Permutations& v) -> ComplexMatrix {
            return random_permutation_matrix(v.n, rng);
          },
          [&](const group::SignFlips& v) -> ComplexMatrix { return random_signs(v.n, rng); },
          [&](const group::SignedPermutations& v) -> ComplexMatrix {
            const ComplexMatrix p = random_permutation_matrix(v.n, rng);
            return p * random_signs(v.n, rng);
          },
          [&](const group::FiniteMultiset& v) -> ComplexMatrix {
            if (v.semantics != group::Semantics::kGroup) {
              throw Error("haar_sample: a multiset without group closure has no Haar measure");
            }
            return v.elements[rng.uniform_index(v.elements.size())].matrix();
          },
          [&](const group::TensorProduct& v) -> ComplexMatrix {
            const ComplexMatrix a = sample_matrix(*v.first, rng);
            return kron(a, sample_matrix(*v.second, rng));
          },
          [&](const group::DirectSum& v) -> ComplexMatrix {
            std::vector<ComplexMatrix> blocks;
            blocks.reserve(v.parts.size());
            for (const auto& p : v.parts) blocks.push_back(sample_matrix(p, rng));
            return block_diagonal(blocks);
          },
          [&](const group::Conjugated& v) -> ComplexMatrix {
            return v.basis.matrix() * sample_matrix(*v.inner, rng) * v.basis.adjoint();
          },
          [&](const group::Trivial& v) -> ComplexMatrix {
            return ComplexMatrix::Identity(v.n, v.n);
          },
      },
      g.variant());
}

}  // namespace

UnitaryMatrix haar_sample(const SymmetryGroup& g, RandomStream& rng) {
  return UnitaryMatrix(sample_matrix(g, rng));
}

// ---------------------------------------------------------------------------------------------

bool contains(const SymmetryGroup& g, const ComplexMatrix& v, double tol) {
  if (v.rows() != g.dim() || v.cols() != g.dim()) return false;
  if (!UnitaryMatrix::is_unitary(v, std::max(tol, tolerance::kUnitary))) return false;
  return std::visit(
      Overloaded{
          [&](const group::FullUnitary&) { return true; },
          [&](const group::ConjugatedTorus& c) {
            return is_diagonal(c.basis.adjoint() * v * c.basis.matrix(), tol);
          },
          [&](const group::Permutations&) { return is_monomial(v, tol, true, true); },
          [&](const group::SignFlips&) {
            return is_diagonal(v, tol) && is_monomial(v, tol, true, false);
          },
          [&](const group::SignedPermutations&) { return is_monomial(v, tol, true, false); },
          [&](const group::FiniteMultiset& f) { return contains_element(f.elements, v, tol); },
          [&](const group::TensorProduct& t) {
            // Decide only product-form inputs: v = a (x) b with a, b read off a nonzero block.
            const int n2 = t.second->dim();
            const int n1 = t.first->dim();
            Eigen::Index bi = 0, bj = 0;
            double best = -1.0;
            for (int i = 0; i < n1; ++i) {
              for (int j = 0; j < n1; ++j) {
                const double w = v.block(i * n2, j * n2, n2, n2).norm();
                if (w > best) {
                  best = w;
                  bi = i;
                  bj = j;
                }
              }
            }
            ComplexMatrix b = v.block(bi * n2, bj * n2, n2, n2);
            b *= std::sqrt(static_cast<double>(n2)) / b.norm();
            ComplexMatrix a(n1, n1);
            for (int i = 0; i < n1; ++i) {
              for (int j = 0; j < n1; ++j) {
                a(i, j) = (b.adjoint() * v.block(i * n2, j * n2, n2, n2)).trace() /
                          static_cast<double>(n2);
              }
            }
            if (!approx_equal(kron(a, b), v, tol * std::max(1, n1 * n2))) return false;
            return contains(*t.first, a, tol) && contains(*t.second, b, tol);
          },
          [&](const group::DirectSum& d) {
            Eigen::Index offset = 0;
            ComplexMatrix rest = v;
            for (const auto& p : d.parts) {
              const int k = p.dim();
              if (!contains(p, v.block(offset, offset, k, k), tol)) return false;
              rest.block(offset, offset, k, k).setZero();
              offset += k;
            }
            return rest.norm() <= tol;
          },
          [&](const group::Conjugated& c) {
            return contains(*c.inner, c.basis.adjoint() * v * c.basis.matrix(), tol);
          },
          [&](const group::Trivial& t) {
            return approx_equal(v, ComplexMatrix::Identity(t.n, t.n), tol);
          },
      },
      g.variant());
}

std::optional<bool> is_structural_subgroup(const SymmetryGroup& sub, const SymmetryGroup& g) {
  if (sub.dim() != g.dim()) return false;
  constexpr double kTol = 1e-9;
  if (sub.as<group::Trivial>()) return true;
  if (g.as<group::FullUnitary>()) return true;

  // Finite collections: every element must lie in g.
  if (const auto* f = sub.as<group::FiniteMultiset>()) {
    for (const auto& e : f->elements) {
      if (!contains(g, e.matrix(), kTol)) return false;
    }
    return true;
  }
  if (const auto* c = sub.as<group::ConjugatedTorus>()) {
    if (const auto* h = g.as<group::ConjugatedTorus>()) {
      return is_monomial(h->basis.adjoint() * c->basis.matrix(), kTol, false, false);
    }
    if (g.as<group::SignedPermutations>() || g.as<group::SignFlips>() ||
        g.as<group::Permutations>() || g.as<group::Trivial>()) {
      return false;  // finite groups cannot contain a torus of positive dimension
    }
  }
  if (sub.as<group::SignFlips>()) {
    if (g.as<group::SignedPermutations>() || g.as<group::SignFlips>()) return true;
    if (const auto* h = g.as<group::ConjugatedTorus>()) {
      return is_monomial(h->basis.matrix(), kTol, false, false);
    }
    if (g.as<group::Permutations>()) return sub.dim() == 1;
  }
  if (sub.as<group::Permutations>()) {
    if (g.as<group::SignedPermutations>() || g.as<group::Permutations>()) return true;
  }
  if (sub.as<group::SignedPermutations>()) {
    if (g.as<group::SignedPermutations>()) return true;
  }
  if (const auto* ts = sub.as<group::TensorProduct>()) {
    if (const auto* tg = g.as<group::TensorProduct>()) {
      if (ts->first->dim() != tg->first->dim()) return std::nullopt;
      const auto a = is_structural_subgroup(*ts->first, *tg->first);
      const auto b = is_structural_subgroup(*ts->second, *tg->second);
      if (a && b) return *a && *b;
      return std::nullopt;
    }
  }
  if (const auto* ds = sub.as<group::DirectSum>()) {
    if (const auto* dg = g.as<group::DirectSum>()) {
      if (ds->parts.size() != dg->parts.size()) return std::nullopt;
      bool all = true;
      for (std::size_t k = 0; k < ds->parts.size(); ++k) {
        const auto r = is_structural_subgroup(ds->parts[k], dg->parts[k]);
        if (!r) return std::nullopt;
        all = all && *r;
      }
      return all;
    }
    if (const auto* tg = g.as<group::ConjugatedTorus>()) {
      // Block-diagonal product of tori / trivial factors inside the diagonal torus.
      if (!is_monomial(tg->basis.matrix(), kTol, false, false)) return std::nullopt;
      for (const auto& p : ds->parts) {
        const auto* pt = p.as<group::ConjugatedTorus>();
        if (!(p.as<group::Trivial>() || p.as<group::SignFlips>() ||
              (pt && is_monomial(pt->basis.matrix(), kTol, false, false)))) {
          return std::nullopt;
        }
      }
      return true;
    }
  }
  if (const auto* cs = sub.as<group::Conjugated>()) {
    if (const auto* cg = g.as<group::Conjugated>()) {
      if (approx_equal(cs->basis.matrix(), cg->basis.matrix(), kTol)) {
        return is_structural_subgroup(*cs->inner, *cg->inner);
      }
    }
  }
  if (sub.variant().index() == g.variant().index()) {
    if (sub.as<group::FullUnitary>() || sub.as<group::Permutations>() ||
        sub.as<group::SignedPermutations>() || sub.as<group::SignFlips>()) {
      return true;
    }
  }
  return std::nullopt;
}

}  // namespace symcap
