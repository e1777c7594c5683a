#include <cmath>

#include "symcap/symgroups.hpp"

namespace symcap {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

ComplexMatrix fully_mixed(const ComplexMatrix& a) {
  const Eigen::Index n = a.rows();
  return (a.trace() / static_cast<double>(n)) * ComplexMatrix::Identity(n, n);
}

// (Tr A / N) I + (sum_{i != j} A_ij / (N (N - 1))) (J - I).
ComplexMatrix permutation_average(const ComplexMatrix& a) {
  const Eigen::Index n = a.rows();
  if (n == 1) return a;
  const Complex trace = a.trace();
  const Complex off = a.sum() - trace;
  const Complex off_mean = off / static_cast<double>(n * (n - 1));
  ComplexMatrix out = ComplexMatrix::Constant(n, n, off_mean);
  out.diagonal().setConstant(trace / static_cast<double>(n));
  return out;
}

std::vector<Eigen::Index> block_offsets(const group::DirectSum& d) {
  std::vector<Eigen::Index> offsets{0};
  for (const auto& p : d.parts) offsets.push_back(offsets.back() + p.dim());
  return offsets;
}

}  // namespace

ComplexMatrix mean_element(const SymmetryGroup& g) {
  const int n = g.dim();
  return std::visit(
      Overloaded{
          [&](const group::Permutations&) -> ComplexMatrix {
            return ComplexMatrix::Constant(n, n, 1.0 / n);
          },
          [&](const group::Trivial&) -> ComplexMatrix { return ComplexMatrix::Identity(n, n); },
          [&](const group::FiniteMultiset& f) -> ComplexMatrix {
            ComplexMatrix sum = ComplexMatrix::Zero(n, n);
            for (const auto& e : f.elements) sum += e.matrix();
            return sum / static_cast<double>(f.elements.size());
          },
          [&](const group::TensorProduct& t) -> ComplexMatrix {
            return kron(mean_element(*t.first), mean_element(*t.second));
          },
          [&](const group::DirectSum& d) -> ComplexMatrix {
            ComplexMatrix out = ComplexMatrix::Zero(n, n);
            const auto offsets = block_offsets(d);
            for (std::size_t k = 0; k < d.parts.size(); ++k) {
              const Eigen::Index s = offsets[k + 1] - offsets[k];
              out.block(offsets[k], offsets[k], s, s) = mean_element(d.parts[k]);
            }
            return out;
          },
          [&](const group::Conjugated& c) -> ComplexMatrix {
            return c.basis.matrix() * mean_element(*c.inner) * c.basis.adjoint();
          },
          // Full unitary group, tori, sign flips and signed permutations all average to zero.
          [&](const auto&) -> ComplexMatrix { return ComplexMatrix::Zero(n, n); },
      },
      g.variant());
}

ComplexMatrix average(const SymmetryGroup& g, const ComplexMatrix& a) {
  const int n = g.dim();
  if (a.rows() != n || a.cols() != n) {
    throw DimensionError("average: group acts on dimension " + std::to_string(n) +
                         " but matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  return std::visit(
      Overloaded{
          [&](const group::FullUnitary&) -> ComplexMatrix { return fully_mixed(a); },
          [&](const group::SignedPermutations&) -> ComplexMatrix { return fully_mixed(a); },
          [&](const group::ConjugatedTorus& c) -> ComplexMatrix {
            const ComplexMatrix& w = c.basis.matrix();
            return w * diagonal_part(w.adjoint() * a * w) * w.adjoint();
          },
          [&](const group::SignFlips&) -> ComplexMatrix { return diagonal_part(a); },
          [&](const group::Permutations&) -> ComplexMatrix { return permutation_average(a); },
          [&](const group::FiniteMultiset& f) -> ComplexMatrix {
            ComplexMatrix sum = ComplexMatrix::Zero(n, n);
            for (const auto& e : f.elements) sum += e.matrix() * a * e.adjoint();
            return sum / static_cast<double>(f.elements.size());
          },
          [&](const group::TensorProduct& t) -> ComplexMatrix {
            // A = sum_{p,q} E_pq (x) A^(p,q)  =>  A_G(A) = sum_{p,q} A_G1(E_pq) (x) A_G2(A^(p,q)).
            const int n1 = t.first->dim();
            const int n2 = t.second->dim();
            ComplexMatrix out = ComplexMatrix::Zero(n, n);
            ComplexMatrix unit = ComplexMatrix::Zero(n1, n1);
            for (int p = 0; p < n1; ++p) {
              for (int q = 0; q < n1; ++q) {
                const ComplexMatrix block = a.block(p * n2, q * n2, n2, n2);
                if (block.norm() == 0.0) continue;
                unit(p, q) = 1.0;
                out += kron(average(*t.first, unit), average(*t.second, block));
                unit(p, q) = 0.0;
              }
            }
            return out;
          },
          [&](const group::DirectSum& d) -> ComplexMatrix {
            // Independent block draws: diagonal blocks are averaged, block (i, j) with i != j
            // becomes M_i A^(i,j) M_j* with M_k the component mean elements.
            const auto offsets = block_offsets(d);
            std::vector<ComplexMatrix> means;
            means.reserve(d.parts.size());
            for (const auto& p : d.parts) means.push_back(mean_element(p));
            ComplexMatrix out = ComplexMatrix::Zero(n, n);
            for (std::size_t i = 0; i < d.parts.size(); ++i) {
              const Eigen::Index si = offsets[i + 1] - offsets[i];
              for (std::size_t j = 0; j < d.parts.size(); ++j) {
                const Eigen::Index sj = offsets[j + 1] - offsets[j];
                const ComplexMatrix block = a.block(offsets[i], offsets[j], si, sj);
                if (i == j) {
                  out.block(offsets[i], offsets[i], si, si) = average(d.parts[i], block);
                } else if (means[i].norm() > 0.0 && means[j].norm() > 0.0) {
                  out.block(offsets[i], offsets[j], si, sj) =
                      means[i] * block * means[j].adjoint();
                }
              }
            }
            return out;
          },
          [&](const group::Conjugated& c) -> ComplexMatrix {
            const ComplexMatrix& w = c.basis.matrix();
            return w * average(*c.inner, w.adjoint() * a * w) * w.adjoint();
          },
          [&](const group::Trivial&) -> ComplexMatrix { return a; },
      },
      g.variant());
}

bool is_fully_mixing(const SymmetryGroup& g) {
  if (g.as<group::FullUnitary>() || g.as<group::SignedPermutations>()) return true;
  if (g.as<group::Trivial>()) return g.dim() == 1;
  const int n = g.dim();
  ComplexMatrix unit = ComplexMatrix::Zero(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      unit(p, q) = 1.0;
      const ComplexMatrix expected =
          (p == q ? 1.0 / n : 0.0) * ComplexMatrix::Identity(n, n);
      const bool ok = (average(g, unit) - expected).norm() <= 1e-10;
      unit(p, q) = 0.0;
      if (!ok) return false;
    }
  }
  return true;
}

double fixed_point_residual(const SymmetryGroup& g, const ComplexMatrix& q) {
  return (average(g, q) - q).norm();
}

bool is_fixed_point(const SymmetryGroup& g, const CovarianceMatrix& q, double tol) {
  return fixed_point_residual(g, q.matrix()) <= tol;
}

}  // namespace symcap
