#pragma once

// Brute-force references used by the tests. Nothing here calls the closed forms under test.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "symcap/matcore.hpp"
#include "symcap/random_stream.hpp"

namespace oracle {

using symcap::Complex;
using symcap::ComplexMatrix;

inline std::vector<ComplexMatrix> permutation_matrices(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<ComplexMatrix> out;
  do {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, p[i]) = 1.0;
    out.push_back(m);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<ComplexMatrix> sign_matrices(int n) {
  std::vector<ComplexMatrix> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = (mask >> i) & 1 ? -1.0 : 1.0;
    out.push_back(m);
  }
  return out;
}

inline std::vector<ComplexMatrix> signed_permutation_matrices(int n) {
  std::vector<ComplexMatrix> out;
  for (const auto& p : permutation_matrices(n)) {
    for (const auto& s : sign_matrices(n)) out.push_back(p * s);
  }
  return out;
}

/// diag(w^k1, ..., w^kn) for w a primitive `order`-th root of unity. Averaging over this finite
/// subgroup of the torus kills every off-diagonal entry once order >= 3, with no sampling error.
inline std::vector<ComplexMatrix> root_of_unity_diagonals(int n, int order) {
  std::vector<ComplexMatrix> out;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= order;
  for (int code = 0; code < total; ++code) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    int c = code;
    for (int i = 0; i < n; ++i) {
      m(i, i) = std::polar(1.0, 2.0 * M_PI * (c % order) / order);
      c /= order;
    }
    out.push_back(m);
  }
  return out;
}

inline ComplexMatrix twirl(const std::vector<ComplexMatrix>& elements, const ComplexMatrix& a) {
  ComplexMatrix sum = ComplexMatrix::Zero(a.rows(), a.cols());
  for (const auto& f : elements) sum += f * a * f.adjoint();
  return sum / static_cast<double>(elements.size());
}

inline std::vector<ComplexMatrix> conjugate_all(const std::vector<ComplexMatrix>& elements,
                                                const ComplexMatrix& w) {
  std::vector<ComplexMatrix> out;
  for (const auto& f : elements) out.push_back(w * f * w.adjoint());
  return out;
}

inline std::vector<ComplexMatrix> kron_all(const std::vector<ComplexMatrix>& a,
                                           const std::vector<ComplexMatrix>& b) {
  std::vector<ComplexMatrix> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      ComplexMatrix k(x.rows() * y.rows(), x.cols() * y.cols());
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) k.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
      }
      out.push_back(k);
    }
  }
  return out;
}

inline std::vector<ComplexMatrix> block_diag_all(const std::vector<ComplexMatrix>& a,
                                                 const std::vector<ComplexMatrix>& b) {
  std::vector<ComplexMatrix> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      ComplexMatrix m = ComplexMatrix::Zero(x.rows() + y.rows(), x.cols() + y.cols());
      m.topLeftCorner(x.rows(), x.cols()) = x;
      m.bottomRightCorner(y.rows(), y.cols()) = y;
      out.push_back(m);
    }
  }
  return out;
}

/// log det through the eigenvalues of the Hermitian matrix I + H Q H*.
inline double logdet_by_eigenvalues(const ComplexMatrix& h, const ComplexMatrix& q) {
  const ComplexMatrix k = ComplexMatrix::Identity(h.rows(), h.rows()) + h * q * h.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (k + k.adjoint()));
  return es.eigenvalues().array().log().sum();
}

/// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// E log(X + Y cos phi) = log((X + sqrt(X^2 - Y^2)) / 2) for X > |Y|.
inline double circle_log_average(double x, double y) {
  return std::log((x + std::sqrt(x * x - y * y)) / 2.0);
}

}  // namespace oracle
