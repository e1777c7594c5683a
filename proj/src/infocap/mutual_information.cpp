#include <cmath>
#include <numbers>

#include "symcap/infocap.hpp"
#include "symcap/parallel.hpp"

namespace symcap {

namespace {

constexpr std::size_t kChunk = 128;

// Per-chunk mean and centered sum of squares, merged in chunk order with the pairwise update.
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    const double total = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / total;
    m2 += o.m2 + delta * delta * count * o.count / total;
    count = total;
  }
  double std_error() const { return count > 1.0 ? std::sqrt(m2 / (count - 1.0) / count) : 0.0; }
};

template <class F>
Moments reduce(std::size_t n, F&& value) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Moments> partial(chunks);
  for_each_chunk(n, kChunk, [&](std::size_t begin, std::size_t end, std::size_t c) {
    for (std::size_t i = begin; i < end; ++i) partial[c].add(value(i));
  });
  Moments total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace

nlohmann::json to_json(const MIEstimate& e, double unit) {
  return {{"value", e.value * unit}, {"std_error", e.std_error * unit}, {"n", e.n_samples},
          {"seed", e.seed}};
}

MIEstimate estimate_mi(const ChannelModel& model, const CovarianceMatrix& q, int n, RandomStream& rng) {
  if (n < 100) throw Error("estimate_mi: n must be >= 100");
  if (q.dim() != model.n()) {
    throw DimensionError("estimate_mi: Q is " + std::to_string(q.dim()) + "x" +
                         std::to_string(q.dim()) + " but the channel has " +
                         std::to_string(model.n()) + " inputs");
  }
  return estimate_mi(sample(model, rng, n), q.matrix(), rng.seed());
}

MIEstimate estimate_mi(const std::vector<ComplexMatrix>& samples, const ComplexMatrix& q,
                       std::uint64_t seed) {
  if (samples.empty()) throw Error("estimate_mi: empty sample list");
  if (samples.front().cols() != q.rows()) throw DimensionError("estimate_mi: dimension mismatch");
  const Moments m = reduce(samples.size(), [&](std::size_t i) {
    return logdet_kernel_unchecked(samples[i], q);
  });
  return {m.mean, m.std_error(), static_cast<long>(samples.size()), seed};
}

PairedDifference paired_difference(const std::vector<ComplexMatrix>& samples,
                                   const ComplexMatrix& q_a, const ComplexMatrix& q_b) {
  if (samples.empty()) throw Error("paired_difference: empty sample list");
  if (samples.front().cols() != q_a.rows() || q_a.rows() != q_b.rows()) {
    throw DimensionError("paired_difference: dimension mismatch");
  }
  const Moments m = reduce(samples.size(), [&](std::size_t i) {
    return logdet_kernel_unchecked(samples[i], q_a) - logdet_kernel_unchecked(samples[i], q_b);
  });
  return {m.mean, m.std_error(), static_cast<long>(samples.size())};
}

namespace {

void check_two_by_two(double a, double b, Complex c) {
  ComplexMatrix q(2, 2);
  q << a, std::conj(c), c, b;
  std::string why;
  if (!CovarianceMatrix::satisfies_invariants(q, &why)) {
    throw InvariantError("not a valid covariance: " + why);
  }
}

}  // namespace

double mi_closed_form_alpha(double alpha, double a, double b, Complex c) {
  if (!(alpha >= 1.0 / std::sqrt(2.0) - 1e-15)) throw Error("alpha must be at least 1/sqrt(2)");
  check_two_by_two(a, b, c);
  const double arg = (1.0 + a) * (1.0 + alpha * alpha * b) - alpha * alpha * std::norm(c);
  if (!(arg > 0.0)) throw Error("mi_closed_form_alpha: non-positive log argument");
  return std::log(arg);
}

double mi_closed_form_inf(double a, double b, Complex c) {
  check_two_by_two(a, b, c);
  const double base = 1.0 + a + 4.0 * b;
  if (!(base - 4.0 * std::abs(c) > 0.0)) throw Error("mi_closed_form_inf: non-positive log argument");
  const double r = 4.0 * std::abs(c);
  const double shift = std::arg(c);
  auto trapezoid = [&](int nodes) {
    double sum = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / nodes;
      sum += std::log(base + r * std::cos(phi + shift));
    }
    return sum / nodes;
  };
  // Smooth periodic integrand: the trapezoid rule converges geometrically.
  double prev = trapezoid(16);
  for (int nodes = 32; nodes <= (1 << 22); nodes *= 2) {
    const double next = trapezoid(nodes);
    if (std::abs(next - prev) <= 1e-10) return next;
    prev = next;
  }
  throw Error("mi_closed_form_inf: quadrature did not converge");
}

}  // namespace symcap
