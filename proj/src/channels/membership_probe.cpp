#include <algorithm>
#include <cmath>

#include "symcap/channels.hpp"

namespace symcap {

namespace {

constexpr int kProbes = 8;
constexpr std::uint64_t kProbeStream = 0x70726f6265ULL;

// Kolmogorov survival function Q(lambda) = 2 sum_k (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term <= 1e-12 * std::abs(sum) || term <= 1e-300) return std::clamp(2.0 * sum, 0.0, 1.0);
  }
  return 1.0;  // series did not converge: lambda is tiny
}

// Snaps values onto a grid of spacing `tol` so rounding noise does not break ties.
void quantize(std::vector<double>& v, double tol) {
  if (tol <= 0.0) return;
  for (double& x : v) x = std::round(x / tol) * tol;
}

}  // namespace

double ks_distance(std::vector<double> a, std::vector<double> b, double tie_tol) {
  if (a.empty() || b.empty()) throw Error("ks_distance: empty sample");
  quantize(a, tie_tol);
  quantize(b, tie_tol);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_p_value(double d, std::size_t n1, std::size_t n2) {
  const double ne = static_cast<double>(n1) * static_cast<double>(n2) / static_cast<double>(n1 + n2);
  const double root = std::sqrt(ne);
  return kolmogorov_q((root + 0.12 + 0.11 / root) * d);
}

ProbeReport membership_probe(const ChannelModel& model, const UnitaryMatrix& v, int n,
                             RandomStream& rng, double level) {
  const int dim = model.n();
  if (v.dim() != dim) {
    throw DimensionError("membership_probe: V is " + std::to_string(v.dim()) + "x" +
                         std::to_string(v.dim()) + " but the channel has " + std::to_string(dim) +
                         " inputs");
  }
  if (n < 1000) throw Error("membership_probe: n must be >= 1000");

  // Probe family depends on (seed, N) only.
  RandomStream probe_rng(rng.seed(), kProbeStream + static_cast<std::uint64_t>(dim));
  std::vector<ComplexMatrix> probes;
  for (int r = 0; r < kProbes; ++r) probes.push_back(random_hermitian(dim, probe_rng));

  // Independent samples for the two sides.
  const auto first = sample(model, rng, n);
  const auto second = sample(model, rng, n);
  std::vector<std::vector<double>> lhs(kProbes), rhs(kProbes);
  double scale = 0.0;
  for (int l = 0; l < n; ++l) {
    const ComplexMatrix m1 = first[l].adjoint() * first[l];
    const ComplexMatrix m2h = second[l].adjoint() * second[l];
    const ComplexMatrix m2 = v.adjoint() * m2h * v.matrix();
    for (int r = 0; r < kProbes; ++r) {
      const double a = trace_inner(probes[r], m1);
      const double b = trace_inner(probes[r], m2);
      lhs[r].push_back(a);
      rhs[r].push_back(b);
      scale = std::max({scale, std::abs(a), std::abs(b)});
    }
  }

  ProbeReport report;
  report.level = level;
  report.n_probes = kProbes;
  report.n = n;
  const double tie_tol = 1e-9 * std::max(scale, 1e-300);
  for (int r = 0; r < kProbes; ++r) {
    const double d = ks_distance(lhs[r], rhs[r], tie_tol);
    const double p = ks_p_value(d, lhs[r].size(), rhs[r].size());
    report.statistic = std::max(report.statistic, d);
    report.p_value = std::min(report.p_value, p);
  }
  report.consistent = report.p_value >= level / kProbes;
  return report;
}

}  // namespace symcap
