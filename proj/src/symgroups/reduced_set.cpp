#include <cmath>
#include <numeric>

#include "symcap/symgroups.hpp"

namespace symcap {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kWeightTol = 1e-10;

std::vector<double> checked_probabilities(const std::vector<double>& w, std::size_t expected,
                                          const char* where) {
  if (w.size() != expected) {
    throw Error(std::string(where) + ": expected " + std::to_string(expected) +
                " weights, got " + std::to_string(w.size()));
  }
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < -kWeightTol) {
      throw Error(std::string(where) + ": weights must be non-negative");
    }
    sum += std::max(x, 0.0);
  }
  if (std::abs(sum - 1.0) > kWeightTol) {
    throw Error(std::string(where) + ": weights must sum to one");
  }
  std::vector<double> out(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) out[k] = std::max(w[k], 0.0) / sum;
  return out;
}

std::vector<double> dirichlet(std::size_t k, RandomStream& rng) {
  std::vector<double> w(k);
  double sum = 0.0;
  for (auto& x : w) {
    x = -std::log(1.0 - rng.uniform());
    sum += x;
  }
  for (auto& x : w) x /= sum;
  return w;
}

const SetParameters& child_or_empty(const SetParameters& p, std::size_t k) {
  static const SetParameters kEmpty{};
  return k < p.children.size() ? p.children[k] : kEmpty;
}

ComplexMatrix embed_matrix(const ReducedSet& s, const SetParameters& p) {
  return std::visit(
      Overloaded{
          [&](const reduced::Singleton& v) -> ComplexMatrix { return v.point.matrix(); },
          [&](const reduced::ConjugatedSimplex& v) -> ComplexMatrix {
            const auto w = checked_probabilities(p.weights, v.basis.dim(), "conjugated_simplex");
            ComplexVector d(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) d(i) = w[i];
            return v.basis.matrix() * d.asDiagonal() * v.basis.adjoint();
          },
          [&](const reduced::BlockKron& v) -> ComplexMatrix {
            const ComplexMatrix inner = embed_matrix(*v.inner, child_or_empty(p, 0));
            const ComplexMatrix mixed =
                ComplexMatrix::Identity(v.mixed_dim, v.mixed_dim) / static_cast<double>(v.mixed_dim);
            return v.mixed_first ? kron(mixed, inner) : kron(inner, mixed);
          },
          [&](const reduced::WeightedDirectSum& v) -> ComplexMatrix {
            const auto w = checked_probabilities(p.weights, v.blocks.size(), "weighted_direct_sum");
            const int n = s.dim();
            ComplexMatrix out = ComplexMatrix::Zero(n, n);
            Eigen::Index offset = 0;
            for (std::size_t k = 0; k < v.blocks.size(); ++k) {
              const int nk = v.blocks[k].dim();
              out.block(offset, offset, nk, nk) = w[k] * embed_matrix(v.blocks[k], child_or_empty(p, k));
              offset += nk;
            }
            return out;
          },
          [&](const reduced::FullSet& v) -> ComplexMatrix {
            if (!p.covariance) throw Error("full_set: parameters need a covariance");
            if (p.covariance->rows() != v.n) throw DimensionError("full_set: covariance dimension");
            return CovarianceMatrix(*p.covariance).matrix();
          },
          [&](const reduced::Conjugated& v) -> ComplexMatrix {
            const ComplexMatrix& w = v.basis.matrix();
            return w * embed_matrix(*v.inner, child_or_empty(p, 0)) * w.adjoint();
          },
      },
      s.variant());
}

UnitaryMatrix all_ones_eigenbasis(int n) {
  // First column 1/sqrt(N); the rest an orthonormal basis of its complement.
  ComplexMatrix ones = ComplexMatrix::Ones(n, 1);
  Eigen::HouseholderQR<ComplexMatrix> qr(ones);
  ComplexMatrix q = qr.householderQ();
  const Complex first = q(0, 0);
  q.col(0) *= std::conj(first) / std::abs(first);
  return UnitaryMatrix(q);
}

}  // namespace

ReducedSet ReducedSet::singleton(const CovarianceMatrix& q) {
  return ReducedSet(reduced::Singleton{q});
}

ReducedSet ReducedSet::conjugated_simplex(const UnitaryMatrix& basis) {
  if (basis.dim() == 1) return singleton(CovarianceMatrix::isotropic(1));
  return ReducedSet(reduced::ConjugatedSimplex{basis});
}

ReducedSet ReducedSet::block_kron(ReducedSet inner, int mixed_dim, bool mixed_first) {
  if (mixed_dim <= 0) throw DimensionError("block_kron: mixed dimension must be >= 1");
  if (const auto* s = inner.as<reduced::Singleton>()) {
    const ComplexMatrix mixed =
        ComplexMatrix::Identity(mixed_dim, mixed_dim) / static_cast<double>(mixed_dim);
    return singleton(CovarianceMatrix(mixed_first ? kron(mixed, s->point.matrix())
                                                  : kron(s->point.matrix(), mixed)));
  }
  return ReducedSet(reduced::BlockKron{std::make_shared<const ReducedSet>(std::move(inner)),
                                       mixed_dim, mixed_first});
}

ReducedSet ReducedSet::weighted_direct_sum(std::vector<ReducedSet> blocks) {
  if (blocks.empty()) throw Error("weighted_direct_sum needs at least one block");
  if (blocks.size() == 1) return std::move(blocks.front());
  return ReducedSet(reduced::WeightedDirectSum{std::move(blocks)});
}

ReducedSet ReducedSet::full_set(int n) {
  if (n <= 0) throw DimensionError("full_set: dimension must be >= 1");
  if (n == 1) return singleton(CovarianceMatrix::isotropic(1));
  return ReducedSet(reduced::FullSet{n});
}

ReducedSet ReducedSet::conjugated(const UnitaryMatrix& basis, ReducedSet inner) {
  if (basis.dim() != inner.dim()) throw DimensionError("conjugated set: basis/set mismatch");
  if (const auto* s = inner.as<reduced::Singleton>()) {
    const ComplexMatrix& w = basis.matrix();
    return singleton(CovarianceMatrix(w * s->point.matrix() * w.adjoint()));
  }
  if (inner.as<reduced::FullSet>()) return inner;
  return ReducedSet(
      reduced::Conjugated{basis, std::make_shared<const ReducedSet>(std::move(inner))});
}

int ReducedSet::dim() const {
  return std::visit(
      Overloaded{
          [](const reduced::Singleton& v) { return v.point.dim(); },
          [](const reduced::ConjugatedSimplex& v) { return v.basis.dim(); },
          [](const reduced::BlockKron& v) { return v.inner->dim() * v.mixed_dim; },
          [](const reduced::WeightedDirectSum& v) {
            return std::accumulate(v.blocks.begin(), v.blocks.end(), 0,
                                   [](int acc, const ReducedSet& b) { return acc + b.dim(); });
          },
          [](const reduced::FullSet& v) { return v.n; },
          [](const reduced::Conjugated& v) { return v.basis.dim(); },
      },
      v_);
}

int ReducedSet::free_dimension() const {
  return std::visit(
      Overloaded{
          [](const reduced::Singleton&) { return 0; },
          [](const reduced::ConjugatedSimplex& v) { return v.basis.dim() - 1; },
          [](const reduced::BlockKron& v) { return v.inner->free_dimension(); },
          [](const reduced::WeightedDirectSum& v) {
            int d = static_cast<int>(v.blocks.size()) - 1;
            for (const auto& b : v.blocks) d += b.free_dimension();
            return d;
          },
          [](const reduced::FullSet& v) { return v.n * v.n - 1; },
          [](const reduced::Conjugated& v) { return v.inner->free_dimension(); },
      },
      v_);
}

std::string ReducedSet::describe() const {
  return std::visit(
      Overloaded{
          [](const reduced::Singleton& v) -> std::string {
            const int n = v.point.dim();
            const bool iso =
                (v.point.matrix() - ComplexMatrix::Identity(n, n) / static_cast<double>(n)).norm() <
                1e-12;
            return iso ? "{I_" + std::to_string(n) + "/" + std::to_string(n) + "}"
                       : "{Q} (singleton, n=" + std::to_string(n) + ")";
          },
          [](const reduced::ConjugatedSimplex& v) -> std::string {
            return "W Diag_{" + std::to_string(v.basis.dim()) + ",1}(R+) W*";
          },
          [](const reduced::BlockKron& v) -> std::string {
            const std::string mixed = "I_" + std::to_string(v.mixed_dim) + "/" +
                                      std::to_string(v.mixed_dim);
            return v.mixed_first ? mixed + " (x) [" + v.inner->describe() + "]"
                                 : "[" + v.inner->describe() + "] (x) " + mixed;
          },
          [](const reduced::WeightedDirectSum& v) -> std::string {
            std::string out = "(+)_k p_k [";
            for (std::size_t k = 0; k < v.blocks.size(); ++k) {
              if (k) out += ", ";
              out += v.blocks[k].describe();
            }
            return out + "]";
          },
          [](const reduced::FullSet& v) -> std::string {
            return "C_{" + std::to_string(v.n) + ",1}";
          },
          [](const reduced::Conjugated& v) -> std::string {
            return "W [" + v.inner->describe() + "] W*";
          },
      },
      v_);
}

// ---------------------------------------------------------------------------------------------

ReducedSet averaged_set(const SymmetryGroup& g) {
  const int n = g.dim();
  return std::visit(
      Overloaded{
          [&](const group::FullUnitary&) { return ReducedSet::singleton(CovarianceMatrix::isotropic(n)); },
          [&](const group::SignedPermutations&) {
            return ReducedSet::singleton(CovarianceMatrix::isotropic(n));
          },
          [&](const group::ConjugatedTorus& c) { return ReducedSet::conjugated_simplex(c.basis); },
          [&](const group::SignFlips&) {
            return ReducedSet::conjugated_simplex(UnitaryMatrix::identity(n));
          },
          [&](const group::Permutations&) {
            if (n == 1) return ReducedSet::singleton(CovarianceMatrix::isotropic(1));
            std::vector<ReducedSet> blocks;
            blocks.push_back(ReducedSet::singleton(CovarianceMatrix::isotropic(1)));
            blocks.push_back(ReducedSet::singleton(CovarianceMatrix::isotropic(n - 1)));
            return ReducedSet::conjugated(all_ones_eigenbasis(n),
                                          ReducedSet::weighted_direct_sum(std::move(blocks)));
          },
          [&](const group::FiniteMultiset&) -> ReducedSet {
            throw Error("averaged_set: finite multisets have no structured reduced set");
          },
          [&](const group::TensorProduct& t) -> ReducedSet {
            if (is_fully_mixing(*t.second)) {
              return ReducedSet::block_kron(averaged_set(*t.first), t.second->dim());
            }
            if (is_fully_mixing(*t.first)) {
              return ReducedSet::block_kron(averaged_set(*t.second), t.first->dim(), true);
            }
            throw Error("unsupported tensor reduction: neither factor averages to Tr(B)/N I");
          },
          [&](const group::DirectSum& d) -> ReducedSet {
            int nonzero = 0;
            for (const auto& p : d.parts) {
              if (mean_element(p).norm() > 1e-12) ++nonzero;
            }
            if (nonzero > 1) {
              throw Error(
                  "unsupported direct-sum reduction: more than one component has a nonzero mean "
                  "element");
            }
            std::vector<ReducedSet> blocks;
            blocks.reserve(d.parts.size());
            for (const auto& p : d.parts) blocks.push_back(averaged_set(p));
            return ReducedSet::weighted_direct_sum(std::move(blocks));
          },
          [&](const group::Conjugated& c) {
            return ReducedSet::conjugated(c.basis, averaged_set(*c.inner));
          },
          [&](const group::Trivial&) { return ReducedSet::full_set(n); },
      },
      g.variant());
}

CovarianceMatrix embed(const ReducedSet& s, const SetParameters& params) {
  ComplexMatrix q = hermitian_part(embed_matrix(s, params));
  q.diagonal().array() -= (q.trace().real() - 1.0) / static_cast<double>(q.rows());
  return CovarianceMatrix(q);
}

SetParameters random_parameters(const ReducedSet& s, RandomStream& rng) {
  return std::visit(
      Overloaded{
          [&](const reduced::Singleton&) { return SetParameters{}; },
          [&](const reduced::ConjugatedSimplex& v) {
            return SetParameters{dirichlet(v.basis.dim(), rng), std::nullopt, {}};
          },
          [&](const reduced::BlockKron& v) {
            return SetParameters{{}, std::nullopt, {random_parameters(*v.inner, rng)}};
          },
          [&](const reduced::WeightedDirectSum& v) {
            SetParameters p{dirichlet(v.blocks.size(), rng), std::nullopt, {}};
            for (const auto& b : v.blocks) p.children.push_back(random_parameters(b, rng));
            return p;
          },
          [&](const reduced::FullSet& v) {
            return SetParameters{{}, random_covariance(v.n, rng).matrix(), {}};
          },
          [&](const reduced::Conjugated& v) {
            return SetParameters{{}, std::nullopt, {random_parameters(*v.inner, rng)}};
          },
      },
      s.variant());
}

}  // namespace symcap
