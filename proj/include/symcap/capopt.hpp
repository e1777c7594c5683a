#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "symcap/channels.hpp"
#include "symcap/infocap.hpp"
#include "symcap/symgroups.hpp"

namespace symcap {

enum class StepRule { kFixed, kBacktracking };

struct OptConfig {
  int n_saa_samples = 2000;
  int n_eval_samples = 10000;  // fresh draws for the reported capacity
  int max_iters = 2000;
  StepRule step_rule = StepRule::kBacktracking;
  double fixed_step = 0.1;
  double conv_tol = 1e-8;
  std::uint64_t seed = 0;
};

/// Deterministic concave objective g(Q) = sum_l w_l log det(I + H_l Q H_l*) over frozen draws.
class SaaObjective {
 public:
  SaaObjective(std::vector<ComplexMatrix> draws, std::vector<double> weights);
  static SaaObjective from_samples(std::vector<ComplexMatrix> draws);

  /// SAA for generic models; the section-five channels get exact objectives instead (a single
  /// draw for H_alpha, whose integrand does not depend on v, and a 128-node circle rule for H_inf).
  static SaaObjective for_model(const ChannelModel& model, int n_samples, RandomStream& rng);

  int dim() const { return static_cast<int>(draws_.front().cols()); }
  std::size_t size() const { return draws_.size(); }
  bool exact() const { return exact_; }

  double value(const ComplexMatrix& q) const;
  /// sum_l w_l H_l* (I + H_l Q H_l*)^{-1} H_l; the directional derivative along Hermitian D
  /// is Re Tr(G D).
  ComplexMatrix gradient(const ComplexMatrix& q) const;

 private:
  std::vector<ComplexMatrix> draws_;
  std::vector<double> weights_;
  bool exact_ = false;
};

struct CapacityResult {
  CovarianceMatrix q_star = CovarianceMatrix::isotropic(1);
  MIEstimate capacity;
  double saa_value = 0.0;
  ReducedSet reduced_set = ReducedSet::full_set(1);
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

/// Nearest point of the reduced set A_G(C_{N,1}) to the Hermitian part of `x`.
CovarianceMatrix project_to_reduced_set(const SymmetryGroup& g, const ComplexMatrix& x);

struct OptimizerTrace {
  std::vector<double> values;           // g(Q_t)
  std::vector<double> fixed_residuals;  // ||A_G(Q_t) - Q_t||
};

/// Projected gradient ascent over A_G(C_{N,1}), starting at I/N.
CapacityResult optimize_capacity(const ChannelModel& model, const SymmetryGroup& g,
                                 const OptConfig& cfg, OptimizerTrace* trace = nullptr);

/// Same optimizer on a prepared objective; the capacity field is left empty.
CapacityResult optimize_objective(const SaaObjective& objective, const SymmetryGroup& g,
                                  const OptConfig& cfg, OptimizerTrace* trace = nullptr);

/// (C, a_hat) = (2 log((1 + 2 alpha^2) / (2 alpha)), 1 / (2 alpha^2)).
std::pair<double, double> capacity_closed_form_alpha(double alpha);
/// (log 5, diag(0, 1)).
std::pair<double, CovarianceMatrix> capacity_closed_form_inf();

// ---------------------------------------------------------------------------------------------

struct Check {
  std::string description;
  bool pass = false;
  double margin = 0.0;       // >= 0 iff pass
  bool information = false;  // margin is in nats (scaled by the bits flag)
};

struct VerificationReport {
  std::string suite;
  std::vector<Check> checks;
  std::uint64_t seed = 0;

  bool pass() const;
  void add(std::string description, bool pass, double margin, bool information = false);
  void append(const VerificationReport& other);
};

nlohmann::json to_json(const VerificationReport& r, double unit = 1.0);
/// CSV rows "suite,check,pass,margin,seed", no header.
std::string to_csv_rows(const VerificationReport& r, double unit = 1.0);
inline constexpr const char* kCsvHeader = "suite,check,pass,margin,seed";
nlohmann::json to_json(const CapacityResult& r, double unit = 1.0);

/// Paired test of I(A_F(Q)) >= I(Q): pass when D >= -3 stderr(D).
VerificationReport verify_prop1(const ChannelModel& model, const SymmetryGroup& f,
                                const CovarianceMatrix& q, int n, RandomStream& rng);

/// Fixed points of G are fixed by F for random Q. Throws for pairs the structural subgroup test
/// does not recognize.
VerificationReport verify_inclusion(const SymmetryGroup& f, const SymmetryGroup& g, int n_random_q,
                                    RandomStream& rng);

struct InclusionPair {
  std::string name;
  SymmetryGroup sub;
  SymmetryGroup group;
};

/// The recognized F subset G pairs exercised by the inclusion suite.
std::vector<InclusionPair> inclusion_pairs(RandomStream& rng);

VerificationReport run_prop1_suite(const OptConfig& cfg, int n);
VerificationReport run_inclusion_suite(const OptConfig& cfg, int n_random_q = 50);
VerificationReport run_corollary_suite(int which, const OptConfig& cfg);
VerificationReport run_section_five_suite(const OptConfig& cfg);

}  // namespace symcap
