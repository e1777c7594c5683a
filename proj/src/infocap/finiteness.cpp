#include <algorithm>
#include <cmath>

#include "symcap/infocap.hpp"
#include "symcap/parallel.hpp"

namespace symcap {

const char* to_string(FinitenessVerdict v) {
  return v == FinitenessVerdict::kFiniteLikely ? "finite_likely" : "infinite_suspected";
}

nlohmann::json to_json(const FinitenessReport& r) {
  nlohmann::json means = nlohmann::json::array();
  for (const auto& [n, value] : r.running_means) means.push_back({{"n", n}, {"estimate", value}});
  return {{"running_means", means},   {"verdict", to_string(r.verdict)},
          {"slope", r.slope},         {"increasing", r.increasing},
          {"groups", r.groups},       {"slope_threshold", r.slope_threshold},
          {"heuristic", true}};
}

double log1p_norm_draw(const ChannelModel& model, RandomStream& rng) {
  if (const auto* c = model.as<channel::Custom>(); c && c->log1p_norm) return c->log1p_norm(rng);
  return std::log1p(sample_one(model, rng).norm());
}

FinitenessReport finiteness_diagnostic(const ChannelModel& model, const std::vector<long>& sizes,
                                       RandomStream& rng, double slope_threshold) {
  if (sizes.size() < 3) throw Error("finiteness_diagnostic: need at least 3 sample sizes");
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < 10 || (k > 0 && sizes[k] <= sizes[k - 1])) {
      throw Error("finiteness_diagnostic: sizes must be increasing and >= 10");
    }
  }
  const std::size_t total = static_cast<std::size_t>(sizes.back());
  std::vector<double> values(total);
  const std::uint64_t key = rng.engine()();
  constexpr std::size_t kChunk = 4096;
  for_each_chunk(total, kChunk, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    RandomStream local(key, chunk + 1);
    for (std::size_t i = begin; i < end; ++i) values[i] = log1p_norm_draw(model, local);
  });

  FinitenessReport report;
  report.slope_threshold = slope_threshold;
  const std::size_t groups = static_cast<std::size_t>(std::min<long>(100, sizes.front() / 10));
  report.groups = static_cast<int>(groups);

  // Sample i joins group i mod R, so every prefix splits evenly and each size extends the last.
  std::vector<double> sums(groups, 0.0);
  std::vector<long> counts(groups, 0);
  std::size_t consumed = 0;
  for (long n : sizes) {
    for (; consumed < static_cast<std::size_t>(n); ++consumed) {
      sums[consumed % groups] += values[consumed];
      ++counts[consumed % groups];
    }
    std::vector<double> means(groups);
    for (std::size_t g = 0; g < groups; ++g) means[g] = sums[g] / static_cast<double>(counts[g]);
    const auto mid = means.begin() + static_cast<long>(groups / 2);
    std::nth_element(means.begin(), mid, means.end());
    double median = *mid;
    if (groups % 2 == 0) median = 0.5 * (median + *std::max_element(means.begin(), mid));
    report.running_means.emplace_back(n, median);
  }

  // Ordinary least squares of estimate against ln n.
  const double k = static_cast<double>(sizes.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [n, y] : report.running_means) {
    mx += std::log(static_cast<double>(n)) / k;
    my += y / k;
  }
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [n, y] : report.running_means) {
    const double dx = std::log(static_cast<double>(n)) - mx;
    sxy += dx * (y - my);
    sxx += dx * dx;
  }
  report.slope = sxy / sxx;
  report.increasing = true;
  for (std::size_t i = 1; i < report.running_means.size(); ++i) {
    report.increasing = report.increasing &&
                        report.running_means[i].second > report.running_means[i - 1].second;
  }
  report.verdict = report.slope > slope_threshold && report.increasing
                       ? FinitenessVerdict::kInfiniteSuspected
                       : FinitenessVerdict::kFiniteLikely;
  return report;
}

}  // namespace symcap
