#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "symcap/matcore.hpp"
#include "symcap/random_stream.hpp"
#include "symcap/symgroups.hpp"

namespace symcap {

/// Scalar entry law, symmetric with respect to zero.
struct EntryLaw {
  enum class Kind { kComplexGaussian, kSymmetricTwoPoint, kUniformPhaseRadius };
  Kind kind = Kind::kComplexGaussian;
  double param = 1.0;  // Gaussian: std. deviation; two-point: a in {+a, -a}; phase: radius r

  static EntryLaw complex_gaussian(double scale = 1.0) { return {Kind::kComplexGaussian, scale}; }
  static EntryLaw symmetric_two_point(double a) { return {Kind::kSymmetricTwoPoint, a}; }
  static EntryLaw uniform_phase_radius(double r) { return {Kind::kUniformPhaseRadius, r}; }

  /// Invariant under multiplication by any unit phase (not just by -1).
  bool circular() const { return kind != Kind::kSymmetricTwoPoint; }
  Complex draw(RandomStream& rng) const;
};

namespace channel {

struct Gaussian {
  int m, n;
  double scale;
};

/// H = W_M H~ W_N. Column j of H~ has iid entries from `column_laws[j]`, and the whole column is
/// multiplied by an independent uniform phase.
struct ColumnSymmetric {
  UnitaryMatrix w_m;
  UnitaryMatrix w_n;
  std::vector<EntryLaw> column_laws;
};

/// H = c_M c_N*, independent entries.
struct RankOneProduct {
  int m, n;
  EntryLaw law_m;
  EntryLaw law_n;
};

/// H = Hbar + scale * Gaussian.
struct Ricean {
  ComplexMatrix hbar;
  double scale;
  double sv_tol = 1e-9;  // relative to the largest singular value
};

/// H = X (A (x) I_N) with X an m x dN iid Gaussian matrix, so H (I_d (x) W) has the law of H for
/// every W in U(N).
struct BlockInvariant {
  int d, n, m;
  ComplexMatrix mixing;  // A, d x d
};

/// H_alpha = diag(1, alpha v), v uniform on the unit circle.
struct SectionFiveAlpha {
  double alpha;
};

/// H_inf = [[0, 0], [1, 2v]].
struct SectionFiveInf {};

struct Custom {
  std::string name;
  int m, n;
  std::function<ComplexMatrix(RandomStream&)> sampler;
  /// Optional exact log(1 + ||H||_F) drawn from the same randomness as `sampler`, for laws whose
  /// matrices overflow doubles.
  std::function<double(RandomStream&)> log1p_norm;
};

}  // namespace channel

class ChannelModel {
 public:
  using Variant = std::variant<channel::Gaussian, channel::ColumnSymmetric, channel::RankOneProduct,
                               channel::Ricean, channel::BlockInvariant, channel::SectionFiveAlpha,
                               channel::SectionFiveInf, channel::Custom>;

  static ChannelModel gaussian(int m, int n, double scale = 1.0);
  static ChannelModel column_symmetric(const UnitaryMatrix& w_m, const UnitaryMatrix& w_n,
                                       std::vector<EntryLaw> column_laws);
  static ChannelModel rank_one_product(int m, int n, EntryLaw law_m, EntryLaw law_n);
  static ChannelModel ricean(const ComplexMatrix& hbar, double scale, double sv_tol = 1e-9);
  static ChannelModel block_invariant(int d, int n, int m, const ComplexMatrix& mixing);
  static ChannelModel section_five_alpha(double alpha);
  static ChannelModel section_five_inf();
  static ChannelModel custom(std::string name, int m, int n,
                             std::function<ComplexMatrix(RandomStream&)> sampler,
                             std::function<double(RandomStream&)> log1p_norm = {});

  /// Registered custom laws: "exp_cauchy" (entries exp|Z|, Z standard Cauchy, times a uniform
  /// phase; E log(1 + ||H||) is infinite) and "zero" (H = 0).
  static ChannelModel named_custom(const std::string& name, int m, int n);

  int m() const;  // receive antennas
  int n() const;  // transmit antennas
  const Variant& variant() const { return v_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&v_);
  }
  std::string describe() const;

 private:
  explicit ChannelModel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// One draw of H.
ComplexMatrix sample_one(const ChannelModel& model, RandomStream& rng);

/// n iid draws. Consumes one word of `rng`, then fills fixed-size chunks from derived streams so
/// the result does not depend on the worker count.
std::vector<ComplexMatrix> sample(const ChannelModel& model, RandomStream& rng, int n);

/// Largest structured subgroup of G(H) known for the model. Custom models throw.
SymmetryGroup known_symmetry_group(const ChannelModel& model);

struct ProbeReport {
  bool consistent = true;
  double statistic = 0.0;  // largest KS distance over the probes
  double p_value = 1.0;    // smallest per-probe p-value
  double level = 0.01;
  int n_probes = 8;
  int n = 0;
};

/// Necessary-condition test of V*(H*H)V having the law of H*H: two-sample Kolmogorov-Smirnov on
/// Tr(M A_r) for 8 fixed Hermitian probes, Bonferroni-corrected at `level`.
ProbeReport membership_probe(const ChannelModel& model, const UnitaryMatrix& v, int n,
                             RandomStream& rng, double level = 0.01);

/// Asymptotic two-sample KS p-value for distance `d` with sample sizes n1, n2.
double ks_p_value(double d, std::size_t n1, std::size_t n2);

/// Two-sample KS distance. Values closer than `tie_tol` are treated as ties.
double ks_distance(std::vector<double> a, std::vector<double> b, double tie_tol = 0.0);

/// Channel descriptor schema, tagged by "kind":
///   {"kind":"gaussian","m":2,"n":2,"scale":1.0}
///   {"kind":"ricean","hbar":<matrix>,"scale":0.5,"sv_tol":1e-9}
///   {"kind":"sec5_alpha","alpha":2.0}   {"kind":"sec5_inf"}
///   {"kind":"column_symmetric","w_m":<matrix>,"w_n":<matrix>,"column_laws":[<law>...]}
///   {"kind":"rank_one","m":2,"n":3,"law_m":<law>,"law_n":<law>}
///   {"kind":"block_invariant","d":2,"n":2,"m":4,"mixing":<matrix>}
///   {"kind":"custom","sampler":"exp_cauchy","m":2,"n":2}
/// with <law> = {"law":"complex_gaussian"|"symmetric_two_point"|"uniform_phase_radius","param":x}.
ChannelModel channel_from_json(const nlohmann::json& j);
nlohmann::json channel_to_json(const ChannelModel& model);

}  // namespace symcap
