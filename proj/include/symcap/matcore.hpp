#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace symcap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

namespace tolerance {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kPsd = 1e-10;
inline constexpr double kTrace = 1e-12;
inline constexpr double kUnitary = 1e-10;
}  // namespace tolerance

bool all_finite(const ComplexMatrix& a);

/// Unit-trace Hermitian positive-semidefinite N x N matrix (an element of C_{N,1}).
///
/// Construction validates the invariants and stores the exact Hermitian part of the input, so
/// `matrix()` is Hermitian to the last bit.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(const ComplexMatrix& q);

  static CovarianceMatrix isotropic(int n);
  static CovarianceMatrix diagonal(const RealVector& probabilities);

  int dim() const { return static_cast<int>(q_.rows()); }
  const ComplexMatrix& matrix() const { return q_; }

  /// Checks the invariants without throwing; `why` receives the first violated one.
  static bool satisfies_invariants(const ComplexMatrix& q, std::string* why = nullptr);

 private:
  ComplexMatrix q_;
};

/// N x N unitary matrix, ||V V* - I||_F <= 1e-10.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(const ComplexMatrix& v);

  static UnitaryMatrix identity(int n);

  int dim() const { return static_cast<int>(v_.rows()); }
  const ComplexMatrix& matrix() const { return v_; }
  ComplexMatrix adjoint() const { return v_.adjoint(); }

  static bool is_unitary(const ComplexMatrix& v, double tol = tolerance::kUnitary);

 private:
  ComplexMatrix v_;
};

/// log det(I_M + H Q H*) in nats.
double logdet_kernel(const ComplexMatrix& h, const CovarianceMatrix& q);

/// Same kernel on a raw Hermitian PSD matrix; only dimensions are checked. Used on hot paths
/// where `q` is already known to be feasible.
double logdet_kernel_unchecked(const ComplexMatrix& h, const ComplexMatrix& q);

/// Nearest unit-trace PSD matrix (Frobenius) to the Hermitian part of `a`.
CovarianceMatrix project_to_covariance(const ComplexMatrix& a);

/// Euclidean projection of `v` onto the probability simplex (sort-and-threshold).
RealVector project_to_simplex(const RealVector& v);

double frobenius_norm(const ComplexMatrix& a);

/// Re Tr(X* Y), the real trace inner product.
double trace_inner(const ComplexMatrix& x, const ComplexMatrix& y);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix hermitian_part(const ComplexMatrix& a);

/// Diagonal part Delta(A).
ComplexMatrix diagonal_part(const ComplexMatrix& a);

double min_hermitian_eigenvalue(const ComplexMatrix& a);

}  // namespace symcap
