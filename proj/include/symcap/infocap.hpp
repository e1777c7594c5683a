#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "symcap/channels.hpp"

namespace symcap {

/// Monte Carlo estimate of I_H(Q) in nats.
struct MIEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const MIEstimate& e, double unit = 1.0);

/// Mean of log det(I + H Q H*) over n fresh draws, n >= 100.
MIEstimate estimate_mi(const ChannelModel& model, const CovarianceMatrix& q, int n, RandomStream& rng);

/// Same estimate on a pre-drawn sample list (common random numbers across calls).
MIEstimate estimate_mi(const std::vector<ComplexMatrix>& samples, const ComplexMatrix& q,
                       std::uint64_t seed = 0);

struct PairedDifference {
  double value = 0.0;  // mean of I_l(Q_a) - I_l(Q_b)
  double std_error = 0.0;
  long n_samples = 0;
};

PairedDifference paired_difference(const std::vector<ComplexMatrix>& samples,
                                   const ComplexMatrix& q_a, const ComplexMatrix& q_b);

/// log[(1 + a)(1 + alpha^2 b) - alpha^2 |c|^2] for Q = [[a, conj(c)], [c, b]].
double mi_closed_form_alpha(double alpha, double a, double b, Complex c);

/// E log(1 + a + 4b + 4 Re(c v)) over v uniform on the circle, by periodic trapezoid to 1e-10.
double mi_closed_form_inf(double a, double b, Complex c);

enum class FinitenessVerdict { kFiniteLikely, kInfiniteSuspected };

const char* to_string(FinitenessVerdict v);

/// Heuristic divergence check on E log(1 + ||H||). Not a decision procedure.
struct FinitenessReport {
  std::vector<std::pair<long, double>> running_means;  // (n, estimate)
  FinitenessVerdict verdict = FinitenessVerdict::kFiniteLikely;
  double slope = 0.0;  // least-squares slope of the estimate against ln n
  bool increasing = false;
  int groups = 0;
  double slope_threshold = 0.05;
};

nlohmann::json to_json(const FinitenessReport& r);

inline constexpr double kDefaultSlopeThreshold = 0.05;

/// The samples are nested across sizes and split round-robin into R = min(100, sizes[0] / 10)
/// groups; each estimate is the median of the group means. An infinite mean makes that median
/// drift upward with n, while a finite one flattens. Verdict infinite_suspected when the slope
/// exceeds the threshold and every increment is positive.
FinitenessReport finiteness_diagnostic(const ChannelModel& model, const std::vector<long>& sizes,
                                       RandomStream& rng,
                                       double slope_threshold = kDefaultSlopeThreshold);

/// log(1 + ||H||_F) for one draw, through the model's exact hook when it has one.
double log1p_norm_draw(const ChannelModel& model, RandomStream& rng);

}  // namespace symcap
