#include <cmath>
#include <numbers>

#include "symcap/capopt.hpp"
#include "symcap/parallel.hpp"

namespace symcap {

namespace {

constexpr std::size_t kChunk = 64;
constexpr int kCircleNodes = 128;

}  // namespace

SaaObjective::SaaObjective(std::vector<ComplexMatrix> draws, std::vector<double> weights)
    : draws_(std::move(draws)), weights_(std::move(weights)) {
  if (draws_.empty()) throw Error("objective: no draws");
  if (draws_.size() != weights_.size()) throw Error("objective: one weight per draw");
  for (const auto& h : draws_) {
    if (h.cols() != draws_.front().cols() || h.rows() != draws_.front().rows()) {
      throw DimensionError("objective: draws must share dimensions");
    }
    if (!all_finite(h)) throw Error("objective: non-finite draw");
  }
}

SaaObjective SaaObjective::from_samples(std::vector<ComplexMatrix> draws) {
  const std::size_t n = draws.size();
  return SaaObjective(std::move(draws), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SaaObjective SaaObjective::for_model(const ChannelModel& model, int n_samples, RandomStream& rng) {
  if (const auto* a = model.as<channel::SectionFiveAlpha>()) {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = a->alpha;
    SaaObjective o({h}, {1.0});
    o.exact_ = true;
    return o;
  }
  if (model.as<channel::SectionFiveInf>()) {
    std::vector<ComplexMatrix> draws;
    for (int k = 0; k < kCircleNodes; ++k) {
      ComplexMatrix h = ComplexMatrix::Zero(2, 2);
      h(1, 0) = 1.0;
      h(1, 1) = 2.0 * std::polar(1.0, 2.0 * std::numbers::pi * k / kCircleNodes);
      draws.push_back(h);
    }
    SaaObjective o(std::move(draws), std::vector<double>(kCircleNodes, 1.0 / kCircleNodes));
    o.exact_ = true;
    return o;
  }
  if (n_samples < 100) throw Error("objective: n_saa_samples must be >= 100");
  return from_samples(sample(model, rng, n_samples));
}

double SaaObjective::value(const ComplexMatrix& q) const {
  if (q.rows() != dim() || q.cols() != dim()) throw DimensionError("objective: Q has wrong size");
  const std::size_t chunks = (draws_.size() + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  for_each_chunk(draws_.size(), kChunk, [&](std::size_t begin, std::size_t end, std::size_t c) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += weights_[i] * logdet_kernel_unchecked(draws_[i], q);
    partial[c] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

ComplexMatrix SaaObjective::gradient(const ComplexMatrix& q) const {
  if (q.rows() != dim() || q.cols() != dim()) throw DimensionError("objective: Q has wrong size");
  const int n = dim();
  const std::size_t chunks = (draws_.size() + kChunk - 1) / kChunk;
  std::vector<ComplexMatrix> partial(chunks, ComplexMatrix::Zero(n, n));
  for_each_chunk(draws_.size(), kChunk, [&](std::size_t begin, std::size_t end, std::size_t c) {
    ComplexMatrix acc = ComplexMatrix::Zero(n, n);
    for (std::size_t i = begin; i < end; ++i) {
      const ComplexMatrix& h = draws_[i];
      const Eigen::Index m = h.rows();
      const ComplexMatrix k = ComplexMatrix::Identity(m, m) + h * q * h.adjoint();
      Eigen::LLT<ComplexMatrix> llt(k);
      ComplexMatrix g;
      if (llt.info() == Eigen::Success) {
        const ComplexMatrix x = llt.matrixL().solve(h);
        g = x.adjoint() * x;
      } else {
        g = h.adjoint() * k.ldlt().solve(h);
      }
      acc += weights_[i] * g;
    }
    partial[c] = acc;
  });
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (const auto& p : partial) total += p;
  return hermitian_part(total);
}

}  // namespace symcap
