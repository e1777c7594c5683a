#include "symcap/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace symcap {

bool all_finite(const ComplexMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    }
  }
  return true;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

ComplexMatrix diagonal_part(const ComplexMatrix& a) {
  ComplexMatrix d = ComplexMatrix::Zero(a.rows(), a.cols());
  d.diagonal() = a.diagonal();
  return d;
}

double min_hermitian_eigenvalue(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool CovarianceMatrix::satisfies_invariants(const ComplexMatrix& q, std::string* why) {
  auto fail = [why](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (q.rows() == 0 || q.rows() != q.cols()) return fail("covariance must be square and non-empty");
  if (!all_finite(q)) return fail("covariance has non-finite entries");
  const double norm = q.norm();
  if ((q - q.adjoint()).norm() > tolerance::kHermitian * std::max(1.0, norm)) {
    return fail("covariance is not Hermitian");
  }
  const double trace = q.trace().real();
  if (std::abs(trace - 1.0) > tolerance::kTrace) {
    std::ostringstream os;
    os.precision(17);
    os << "covariance trace " << trace << " differs from 1";
    return fail(os.str());
  }
  const double min_eig = min_hermitian_eigenvalue(q);
  if (min_eig < -tolerance::kPsd) {
    std::ostringstream os;
    os << "covariance has negative eigenvalue " << min_eig;
    return fail(os.str());
  }
  return true;
}

CovarianceMatrix::CovarianceMatrix(const ComplexMatrix& q) {
  std::string why;
  if (!satisfies_invariants(q, &why)) throw InvariantError(why);
  q_ = hermitian_part(q);
}

CovarianceMatrix CovarianceMatrix::isotropic(int n) {
  if (n <= 0) throw DimensionError("isotropic covariance needs n >= 1");
  return CovarianceMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

CovarianceMatrix CovarianceMatrix::diagonal(const RealVector& probabilities) {
  ComplexMatrix q = ComplexMatrix::Zero(probabilities.size(), probabilities.size());
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) q(i, i) = probabilities(i);
  return CovarianceMatrix(q);
}

bool UnitaryMatrix::is_unitary(const ComplexMatrix& v, double tol) {
  if (v.rows() == 0 || v.rows() != v.cols() || !all_finite(v)) return false;
  return (v * v.adjoint() - ComplexMatrix::Identity(v.rows(), v.cols())).norm() <= tol;
}

UnitaryMatrix::UnitaryMatrix(const ComplexMatrix& v) : v_(v) {
  if (v.rows() == 0 || v.rows() != v.cols()) throw DimensionError("unitary matrix must be square");
  if (!is_unitary(v)) throw InvariantError("matrix is not unitary to 1e-10");
}

UnitaryMatrix UnitaryMatrix::identity(int n) {
  return UnitaryMatrix(ComplexMatrix::Identity(n, n));
}

double logdet_kernel_unchecked(const ComplexMatrix& h, const ComplexMatrix& q) {
  if (h.cols() != q.rows() || q.rows() != q.cols()) {
    throw DimensionError("logdet_kernel: H has " + std::to_string(h.cols()) +
                         " columns but Q is " + std::to_string(q.rows()) + "x" +
                         std::to_string(q.cols()));
  }
  ComplexMatrix k = h * q * h.adjoint();
  k.diagonal().array() += 1.0;
  Eigen::LLT<ComplexMatrix> llt(hermitian_part(k));
  double value = 0.0;
  if (llt.info() == Eigen::Success) {
    const ComplexMatrix& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) value += 2.0 * std::log(l(i, i).real());
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(k), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      value += std::log(std::max(es.eigenvalues()(i), 1.0));
    }
  }
  return std::max(value, 0.0);
}

double logdet_kernel(const ComplexMatrix& h, const CovarianceMatrix& q) {
  if (!all_finite(h)) throw InvariantError("logdet_kernel: H has non-finite entries");
  return logdet_kernel_unchecked(h, q.matrix());
}

RealVector project_to_simplex(const RealVector& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw DimensionError("project_to_simplex: empty vector");
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  RealVector out = (v.array() - theta).max(0.0);
  // Re-normalize the rounding residue onto the positive support.
  const double sum = out.sum();
  if (sum > 0.0) out /= sum;
  return out;
}

CovarianceMatrix project_to_covariance(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw DimensionError("project_to_covariance: matrix must be square");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a));
  const RealVector lambda = project_to_simplex(es.eigenvalues());
  const ComplexMatrix& v = es.eigenvectors();
  ComplexMatrix q = v * lambda.cast<Complex>().asDiagonal() * v.adjoint();
  q = hermitian_part(q);
  // Trace is exact up to a few ulps; fold the residue into the diagonal.
  const double drift = q.trace().real() - 1.0;
  q.diagonal().array() -= drift / static_cast<double>(q.rows());
  if (!CovarianceMatrix::satisfies_invariants(q)) {
    // A negative shift could only occur on a vanishing eigenvalue; rebuild from clipped values.
    q = v * lambda.cast<Complex>().asDiagonal() * v.adjoint();
    q = hermitian_part(q) / q.trace().real();
  }
  return CovarianceMatrix(q);
}

double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

double trace_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x.adjoint() * y).trace().real();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace symcap
