#include <cmath>
#include <limits>
#include <sstream>

#include "symcap/capopt.hpp"

namespace symcap {

namespace {

constexpr int kRivals = 20;
constexpr double kBasisTol = 1e-6;
constexpr double kSpreadTol = 1e-4;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

double off_diagonal_norm(const ComplexMatrix& a) { return (a - diagonal_part(a)).norm(); }

// sum_{p,q} Tr(block_pq) E_pq (x) I/n: the nearest point of C_{d,1} (x) I_n/n.
ComplexMatrix block_kron_part(const ComplexMatrix& q, int d, int n) {
  ComplexMatrix x(d, d);
  for (int p = 0; p < d; ++p) {
    for (int r = 0; r < d; ++r) x(p, r) = q.block(p * n, r * n, n, n).trace();
  }
  return kron(x, ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

const CapacityResult& run_pipeline(VerificationReport& report, const std::string& label,
                                   const ChannelModel& model, const OptConfig& cfg,
                                   CapacityResult& storage) {
  const SymmetryGroup g = known_symmetry_group(model);
  storage = optimize_capacity(model, g, cfg);
  report.add(label + ": optimizer converged (" + std::to_string(storage.iterations) + " iterations)",
             storage.converged, cfg.conv_tol - storage.gradient_norm);
  return storage;
}

// q_star against random covariances on common fresh draws.
void dominance(VerificationReport& report, const std::string& label, const ChannelModel& model,
               const CovarianceMatrix& q_star, int n, RandomStream& rng) {
  const auto samples = sample(model, rng, n);
  double worst = std::numeric_limits<double>::infinity();
  for (int r = 0; r < kRivals; ++r) {
    const CovarianceMatrix rival = random_covariance(model.n(), rng);
    const PairedDifference d = paired_difference(samples, q_star.matrix(), rival.matrix());
    worst = std::min(worst, d.value + 3.0 * d.std_error);
  }
  report.add(label + ": q_star beats " + std::to_string(kRivals) + " random covariances within 3 se",
             worst >= 0.0, worst, true);
}

// Spread of the diagonal of W* Q W within each block of equal singular values of hbar.
void ricean_structure(VerificationReport& report, const std::string& label, const ComplexMatrix& hbar,
                      const CovarianceMatrix& q, double sv_tol) {
  const int n = static_cast<int>(hbar.cols());
  Eigen::JacobiSVD<ComplexMatrix> svd(hbar, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RealVector sv = RealVector::Zero(n);
  sv.head(svd.singularValues().size()) = svd.singularValues();
  const ComplexMatrix& w = svd.matrixV();
  const ComplexMatrix d = w.adjoint() * q.matrix() * w;
  const double basis_residual = off_diagonal_norm(d);
  report.add(label + ": W* q_star W is diagonal (residual " + fmt(basis_residual) + ")",
             basis_residual <= kBasisTol, kBasisTol - basis_residual);
  const double tol = sv_tol * std::max(sv.maxCoeff(), 1e-300);
  double spread = 0.0;
  int start = 0;
  for (int j = 1; j <= n; ++j) {
    if (j == n || std::abs(sv(j) - sv(j - 1)) > tol) {
      double lo = d(start, start).real(), hi = lo;
      for (int k = start; k < j; ++k) {
        lo = std::min(lo, d(k, k).real());
        hi = std::max(hi, d(k, k).real());
      }
      spread = std::max(spread, hi - lo);
      start = j;
    }
  }
  report.add(label + ": D constant on singular-value blocks (spread " + fmt(spread) + ")",
             spread <= kSpreadTol, kSpreadTol - spread);
}

}  // namespace

VerificationReport run_corollary_suite(int which, const OptConfig& cfg) {
  if (which < 1 || which > 6) throw Error("corollary suite must be 1..6");
  VerificationReport report;
  report.suite = "corollary" + std::to_string(which);
  report.seed = cfg.seed;
  RandomStream rng(cfg.seed, 0x636f72ULL + static_cast<std::uint64_t>(which));
  OptConfig local = cfg;
  local.seed = splitmix64(cfg.seed ^ (0x5eedULL + static_cast<std::uint64_t>(which)));
  const int n_eval = cfg.n_eval_samples;
  CapacityResult result;

  switch (which) {
    case 1: {
      const auto model = ChannelModel::gaussian(2, 3);
      run_pipeline(report, "gaussian 2x3", model, local, result);
      const double err = (result.q_star.matrix() - CovarianceMatrix::isotropic(3).matrix()).norm();
      report.add("gaussian 2x3: q_star = I/3 (residual " + fmt(err) + ")", err <= kBasisTol, kBasisTol - err);
      dominance(report, "gaussian 2x3", model, result.q_star, n_eval, rng);
      break;
    }
    case 2: {
      const UnitaryMatrix w_m = haar_sample(SymmetryGroup::full_unitary(2), rng);
      const UnitaryMatrix w_n = haar_sample(SymmetryGroup::full_unitary(3), rng);
      const auto model = ChannelModel::column_symmetric(
          w_m, w_n,
          {EntryLaw::complex_gaussian(1.5), EntryLaw::complex_gaussian(1.0),
           EntryLaw::symmetric_two_point(0.5)});
      run_pipeline(report, "column symmetric 2x3", model, local, result);
      const double err = off_diagonal_norm(w_n.matrix() * result.q_star.matrix() * w_n.adjoint());
      report.add("column symmetric 2x3: q_star = W_N* D W_N (off-basis residual " + fmt(err) + ")",
                 err <= kBasisTol, kBasisTol - err);
      dominance(report, "column symmetric 2x3", model, result.q_star, n_eval, rng);
      break;
    }
    case 3: {
      const auto model = ChannelModel::rank_one_product(2, 3, EntryLaw::symmetric_two_point(1.0),
                                                        EntryLaw::complex_gaussian(1.0));
      run_pipeline(report, "rank one 2x3", model, local, result);
      const double err = off_diagonal_norm(result.q_star.matrix());
      report.add("rank one 2x3: q_star diagonal (residual " + fmt(err) + ")", err <= kBasisTol,
                 kBasisTol - err);
      dominance(report, "rank one 2x3", model, result.q_star, n_eval, rng);
      break;
    }
    case 4: {
      ComplexMatrix a(2, 2);
      a << Complex(1.0, 0.0), Complex(0.6, 0.2), Complex(0.1, -0.3), Complex(0.7, 0.0);
      const auto model = ChannelModel::block_invariant(2, 2, 4, a);
      run_pipeline(report, "block invariant d=2 N=2", model, local, result);
      const double err = (result.q_star.matrix() - block_kron_part(result.q_star.matrix(), 2, 2)).norm();
      report.add("block invariant d=2 N=2: q_star in C_{d,1} (x) I/N (residual " + fmt(err) + ")",
                 err <= kBasisTol, kBasisTol - err);
      dominance(report, "block invariant d=2 N=2", model, result.q_star, n_eval, rng);
      break;
    }
    case 5: {
      {
        ComplexMatrix a = ComplexMatrix::Zero(2, 2);
        a(0, 0) = 1.5;
        a(1, 1) = 0.5;
        const auto model = ChannelModel::block_invariant(2, 2, 4, a);
        run_pipeline(report, "diagonal mixing", model, local, result);
        const ComplexMatrix target = diagonal_part(block_kron_part(result.q_star.matrix(), 2, 2));
        const double err = (result.q_star.matrix() - target).norm();
        report.add("diagonal mixing: q_star in Diag_{d,1} (x) I/N (residual " + fmt(err) + ")",
                   err <= kBasisTol, kBasisTol - err);
        dominance(report, "diagonal mixing", model, result.q_star, n_eval, rng);
      }
      {
        const auto model = ChannelModel::block_invariant(2, 2, 4, 0.8 * ComplexMatrix::Identity(2, 2));
        run_pipeline(report, "scalar mixing", model, local, result);
        const double err = (result.q_star.matrix() - CovarianceMatrix::isotropic(4).matrix()).norm();
        report.add("scalar mixing: q_star = I/(dN) (residual " + fmt(err) + ")", err <= kBasisTol,
                   kBasisTol - err);
        dominance(report, "scalar mixing", model, result.q_star, n_eval, rng);
      }
      break;
    }
    case 6: {
      {
        const ComplexMatrix hbar = ComplexMatrix::Identity(2, 2);
        const auto model = ChannelModel::ricean(hbar, 1.0);
        run_pipeline(report, "ricean equal singular values", model, local, result);
        ricean_structure(report, "ricean equal singular values", hbar, result.q_star, 1e-9);
        const double err = (result.q_star.matrix() - CovarianceMatrix::isotropic(2).matrix()).norm();
        report.add("ricean equal singular values: q_star = I/2 (residual " + fmt(err) + ")",
                   err <= kBasisTol, kBasisTol - err);
        dominance(report, "ricean equal singular values", model, result.q_star, n_eval, rng);
      }
      {
        const UnitaryMatrix v = haar_sample(SymmetryGroup::full_unitary(2), rng);
        const UnitaryMatrix w = haar_sample(SymmetryGroup::full_unitary(2), rng);
        RealVector s(2);
        s << 2.0, 1.0;
        const ComplexMatrix hbar = v.matrix() * s.cast<Complex>().asDiagonal() * w.adjoint();
        const auto model = ChannelModel::ricean(hbar, 1.0);
        run_pipeline(report, "ricean singular values (2, 1)", model, local, result);
        ricean_structure(report, "ricean singular values (2, 1)", hbar, result.q_star, 1e-9);
        const int free = result.reduced_set.free_dimension();
        report.add("ricean singular values (2, 1): two free diagonal weights", free == 1,
                   free == 1 ? 0.0 : -1.0);
        dominance(report, "ricean singular values (2, 1)", model, result.q_star, n_eval, rng);
      }
      {
        const UnitaryMatrix v = haar_sample(SymmetryGroup::full_unitary(3), rng);
        const UnitaryMatrix w = haar_sample(SymmetryGroup::full_unitary(3), rng);
        RealVector s(3);
        s << 2.0, 2.0, 1.0;
        const ComplexMatrix hbar = v.matrix() * s.cast<Complex>().asDiagonal() * w.adjoint();
        const auto model = ChannelModel::ricean(hbar, 1.0);
        run_pipeline(report, "ricean singular values (2, 2, 1)", model, local, result);
        ricean_structure(report, "ricean singular values (2, 2, 1)", hbar, result.q_star, 1e-9);
        dominance(report, "ricean singular values (2, 2, 1)", model, result.q_star, n_eval, rng);
      }
      break;
    }
    default:
      break;
  }
  return report;
}

}  // namespace symcap
