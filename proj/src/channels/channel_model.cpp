#include <algorithm>
#include <cmath>
#include <sstream>

#include "symcap/channels.hpp"
#include "symcap/parallel.hpp"

namespace symcap {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantError(what);
}

void require_law(const EntryLaw& law) {
  require(std::isfinite(law.param) && law.param > 0.0, "entry law parameter must be positive");
}

bool is_scalar_identity(const ComplexMatrix& a) {
  const Complex s = a(0, 0);
  return (a - s * ComplexMatrix::Identity(a.rows(), a.cols())).norm() <= 1e-12 * (1.0 + a.norm());
}

bool is_diagonal(const ComplexMatrix& a) {
  return (a - diagonal_part(a)).norm() <= 1e-12 * (1.0 + a.norm());
}

// Exp-Cauchy entries are clamped here so the matrix stays finite; the exact norm goes through
// the log-domain hook instead.
constexpr double kExpClamp = 700.0;

}  // namespace

Complex EntryLaw::draw(RandomStream& rng) const {
  switch (kind) {
    case Kind::kComplexGaussian:
      return param * rng.complex_normal();
    case Kind::kSymmetricTwoPoint:
      return rng.coin() ? Complex(param, 0.0) : Complex(-param, 0.0);
    case Kind::kUniformPhaseRadius:
      return param * rng.unit_phase();
  }
  return {};
}

// ---------------------------------------------------------------------------------------------

ChannelModel ChannelModel::gaussian(int m, int n, double scale) {
  require(m >= 1 && n >= 1, "gaussian: dimensions must be positive");
  require(std::isfinite(scale) && scale > 0.0, "gaussian: scale must be positive");
  return ChannelModel(channel::Gaussian{m, n, scale});
}

ChannelModel ChannelModel::column_symmetric(const UnitaryMatrix& w_m, const UnitaryMatrix& w_n,
                                            std::vector<EntryLaw> column_laws) {
  require(static_cast<int>(column_laws.size()) == w_n.dim(),
          "column_symmetric: need one column law per transmit antenna");
  for (const auto& law : column_laws) require_law(law);
  return ChannelModel(channel::ColumnSymmetric{w_m, w_n, std::move(column_laws)});
}

ChannelModel ChannelModel::rank_one_product(int m, int n, EntryLaw law_m, EntryLaw law_n) {
  require(m >= 1 && n >= 1, "rank_one: dimensions must be positive");
  require_law(law_m);
  require_law(law_n);
  return ChannelModel(channel::RankOneProduct{m, n, law_m, law_n});
}

ChannelModel ChannelModel::ricean(const ComplexMatrix& hbar, double scale, double sv_tol) {
  require(hbar.rows() >= 1 && hbar.cols() >= 1, "ricean: empty mean matrix");
  require(all_finite(hbar), "ricean: mean matrix must be finite");
  require(std::isfinite(scale) && scale > 0.0, "ricean: scale must be positive");
  require(sv_tol >= 0.0, "ricean: sv_tol must be non-negative");
  return ChannelModel(channel::Ricean{hbar, scale, sv_tol});
}

ChannelModel ChannelModel::block_invariant(int d, int n, int m, const ComplexMatrix& mixing) {
  require(d >= 1 && n >= 1 && m >= 1, "block_invariant: dimensions must be positive");
  require(mixing.rows() == d && mixing.cols() == d, "block_invariant: mixing must be d x d");
  require(all_finite(mixing), "block_invariant: mixing must be finite");
  return ChannelModel(channel::BlockInvariant{d, n, m, mixing});
}

ChannelModel ChannelModel::section_five_alpha(double alpha) {
  require(std::isfinite(alpha) && alpha >= 1.0 / std::sqrt(2.0) - 1e-15,
          "sec5_alpha: alpha must be at least 1/sqrt(2)");
  return ChannelModel(channel::SectionFiveAlpha{alpha});
}

ChannelModel ChannelModel::section_five_inf() { return ChannelModel(channel::SectionFiveInf{}); }

ChannelModel ChannelModel::custom(std::string name, int m, int n,
                                  std::function<ComplexMatrix(RandomStream&)> sampler,
                                  std::function<double(RandomStream&)> log1p_norm) {
  require(m >= 1 && n >= 1, "custom: dimensions must be positive");
  require(static_cast<bool>(sampler), "custom: sampler required");
  return ChannelModel(channel::Custom{std::move(name), m, n, std::move(sampler), std::move(log1p_norm)});
}

ChannelModel ChannelModel::named_custom(const std::string& name, int m, int n) {
  if (name == "zero") {
    return custom(name, m, n, [m, n](RandomStream&) { return ComplexMatrix::Zero(m, n).eval(); });
  }
  if (name == "exp_cauchy") {
    auto sampler = [m, n](RandomStream& rng) {
      ComplexMatrix h(m, n);
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < m; ++i) {
          const double z = std::min(std::abs(rng.cauchy()), kExpClamp);
          h(i, j) = std::exp(z) * rng.unit_phase();
        }
      }
      return h;
    };
    // Same draws as the sampler: log ||H|| = 0.5 logsumexp(2|Z_ij|), then log(1 + e^x).
    auto log1p_norm = [m, n](RandomStream& rng) {
      std::vector<double> t;
      t.reserve(static_cast<std::size_t>(m) * n);
      for (int k = 0; k < m * n; ++k) {
        t.push_back(2.0 * std::abs(rng.cauchy()));
        rng.unit_phase();
      }
      const double top = *std::max_element(t.begin(), t.end());
      double acc = 0.0;
      for (double x : t) acc += std::exp(x - top);
      const double log_norm = 0.5 * (top + std::log(acc));
      return std::max(log_norm, 0.0) + std::log1p(std::exp(-std::abs(log_norm)));
    };
    return custom(name, m, n, sampler, log1p_norm);
  }
  throw Error("unknown custom sampler '" + name + "'");
}

int ChannelModel::m() const {
  return std::visit(Overloaded{
                        [](const channel::Gaussian& g) { return g.m; },
                        [](const channel::ColumnSymmetric& c) { return c.w_m.dim(); },
                        [](const channel::RankOneProduct& r) { return r.m; },
                        [](const channel::Ricean& r) { return static_cast<int>(r.hbar.rows()); },
                        [](const channel::BlockInvariant& b) { return b.m; },
                        [](const channel::SectionFiveAlpha&) { return 2; },
                        [](const channel::SectionFiveInf&) { return 2; },
                        [](const channel::Custom& c) { return c.m; },
                    },
                    v_);
}

int ChannelModel::n() const {
  return std::visit(Overloaded{
                        [](const channel::Gaussian& g) { return g.n; },
                        [](const channel::ColumnSymmetric& c) { return c.w_n.dim(); },
                        [](const channel::RankOneProduct& r) { return r.n; },
                        [](const channel::Ricean& r) { return static_cast<int>(r.hbar.cols()); },
                        [](const channel::BlockInvariant& b) { return b.d * b.n; },
                        [](const channel::SectionFiveAlpha&) { return 2; },
                        [](const channel::SectionFiveInf&) { return 2; },
                        [](const channel::Custom& c) { return c.n; },
                    },
                    v_);
}

std::string ChannelModel::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const channel::Gaussian& g) {
                   os << "gaussian(" << g.m << "x" << g.n << ", scale " << g.scale << ")";
                 },
                 [&](const channel::ColumnSymmetric&) {
                   os << "column_symmetric(" << m() << "x" << n() << ")";
                 },
                 [&](const channel::RankOneProduct& r) { os << "rank_one(" << r.m << "x" << r.n << ")"; },
                 [&](const channel::Ricean& r) {
                   os << "ricean(" << m() << "x" << n() << ", scale " << r.scale << ")";
                 },
                 [&](const channel::BlockInvariant& b) {
                   os << "block_invariant(d " << b.d << ", n " << b.n << ", m " << b.m << ")";
                 },
                 [&](const channel::SectionFiveAlpha& a) { os << "sec5_alpha(" << a.alpha << ")"; },
                 [&](const channel::SectionFiveInf&) { os << "sec5_inf"; },
                 [&](const channel::Custom& c) { os << "custom(" << c.name << ")"; },
             },
             v_);
  return os.str();
}

// ---------------------------------------------------------------------------------------------

ComplexMatrix sample_one(const ChannelModel& model, RandomStream& rng) {
  return std::visit(
      Overloaded{
          [&](const channel::Gaussian& g) -> ComplexMatrix {
            return g.scale * complex_gaussian_matrix(g.m, g.n, rng);
          },
          [&](const channel::ColumnSymmetric& c) -> ComplexMatrix {
            const int m = c.w_m.dim();
            const int n = c.w_n.dim();
            ComplexMatrix inner(m, n);
            for (int j = 0; j < n; ++j) {
              for (int i = 0; i < m; ++i) inner(i, j) = c.column_laws[j].draw(rng);
              inner.col(j) *= rng.unit_phase();
            }
            return c.w_m.matrix() * inner * c.w_n.matrix();
          },
          [&](const channel::RankOneProduct& r) -> ComplexMatrix {
            ComplexVector cm(r.m), cn(r.n);
            for (int i = 0; i < r.m; ++i) cm(i) = r.law_m.draw(rng);
            for (int j = 0; j < r.n; ++j) cn(j) = r.law_n.draw(rng);
            return cm * cn.adjoint();
          },
          [&](const channel::Ricean& r) -> ComplexMatrix {
            return r.hbar +
                   r.scale * complex_gaussian_matrix(static_cast<int>(r.hbar.rows()),
                                                     static_cast<int>(r.hbar.cols()), rng);
          },
          [&](const channel::BlockInvariant& b) -> ComplexMatrix {
            const ComplexMatrix x = complex_gaussian_matrix(b.m, b.d * b.n, rng);
            return x * kron(b.mixing, ComplexMatrix::Identity(b.n, b.n));
          },
          [&](const channel::SectionFiveAlpha& a) -> ComplexMatrix {
            ComplexMatrix h = ComplexMatrix::Zero(2, 2);
            h(0, 0) = 1.0;
            h(1, 1) = a.alpha * rng.unit_phase();
            return h;
          },
          [&](const channel::SectionFiveInf&) -> ComplexMatrix {
            ComplexMatrix h = ComplexMatrix::Zero(2, 2);
            h(1, 0) = 1.0;
            h(1, 1) = 2.0 * rng.unit_phase();
            return h;
          },
          [&](const channel::Custom& c) -> ComplexMatrix {
            ComplexMatrix h = c.sampler(rng);
            if (h.rows() != c.m || h.cols() != c.n) {
              throw DimensionError("custom sampler '" + c.name + "' returned " +
                                   std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                                   ", declared " + std::to_string(c.m) + "x" + std::to_string(c.n));
            }
            return h;
          },
      },
      model.variant());
}

std::vector<ComplexMatrix> sample(const ChannelModel& model, RandomStream& rng, int n) {
  if (n < 1) throw Error("sample: n must be >= 1");
  const std::uint64_t key = rng.engine()();
  std::vector<ComplexMatrix> out(static_cast<std::size_t>(n));
  constexpr std::size_t kChunk = 256;
  for_each_chunk(out.size(), kChunk, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    RandomStream local(key, chunk + 1);
    for (std::size_t i = begin; i < end; ++i) out[i] = sample_one(model, local);
  });
  return out;
}

// ---------------------------------------------------------------------------------------------

SymmetryGroup known_symmetry_group(const ChannelModel& model) {
  return std::visit(
      Overloaded{
          [](const channel::Gaussian& g) { return SymmetryGroup::full_unitary(g.n); },
          [](const channel::ColumnSymmetric& c) {
            return SymmetryGroup::conjugated_torus(UnitaryMatrix(c.w_n.adjoint()));
          },
          [](const channel::RankOneProduct& r) {
            // A +-a entry is only invariant under -1, not under the whole circle.
            if (r.law_n.circular()) return SymmetryGroup::diagonal_torus(r.n);
            return SymmetryGroup::sign_flips(r.n);
          },
          [](const channel::Ricean& r) {
            const int n = static_cast<int>(r.hbar.cols());
            Eigen::JacobiSVD<ComplexMatrix> svd(r.hbar, Eigen::ComputeFullU | Eigen::ComputeFullV);
            RealVector sv = RealVector::Zero(n);
            const RealVector s = svd.singularValues();
            sv.head(s.size()) = s;
            const double tol = r.sv_tol * std::max(sv.maxCoeff(), 1e-300);
            // Singular values come sorted, so equal ones are adjacent.
            std::vector<SymmetryGroup> parts;
            int start = 0;
            for (int j = 1; j <= n; ++j) {
              if (j == n || std::abs(sv(j) - sv(j - 1)) > tol) {
                parts.push_back(SymmetryGroup::signed_permutations(j - start));
                start = j;
              }
            }
            SymmetryGroup inner = parts.size() == 1 ? parts.front()
                                                    : SymmetryGroup::direct_sum(std::move(parts));
            return SymmetryGroup::conjugated(UnitaryMatrix(svd.matrixV()), std::move(inner));
          },
          [](const channel::BlockInvariant& b) {
            SymmetryGroup left = is_scalar_identity(b.mixing) ? SymmetryGroup::full_unitary(b.d)
                                 : is_diagonal(b.mixing)      ? SymmetryGroup::diagonal_torus(b.d)
                                                              : SymmetryGroup::trivial(b.d);
            return SymmetryGroup::tensor(std::move(left), SymmetryGroup::full_unitary(b.n));
          },
          [](const channel::SectionFiveAlpha&) {
            return SymmetryGroup::direct_sum({SymmetryGroup::trivial(1), SymmetryGroup::diagonal_torus(1)});
          },
          [](const channel::SectionFiveInf&) {
            return SymmetryGroup::direct_sum({SymmetryGroup::trivial(1), SymmetryGroup::diagonal_torus(1)});
          },
          [](const channel::Custom&) -> SymmetryGroup { throw Error("no declared symmetry"); },
      },
      model.variant());
}

}  // namespace symcap
