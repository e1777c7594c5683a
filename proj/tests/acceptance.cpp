// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "symcap/capopt.hpp"
#include "symcap/cli.hpp"
#include "symcap/matrix_json.hpp"
#include "symcap/standard_symmetry.hpp"

using namespace symcap;
using G = SymmetryGroup;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail.clear();
  o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += why;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double max_abs(const ComplexMatrix& a) { return a.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------------------------

Outcome ac1() {
  Outcome o;
  OptConfig cfg;
  cfg.seed = kSeed;
  cfg.conv_tol = 1e-10;
  double worst_c = 0.0, worst_q = 0.0;
  for (double alpha : {1.0 / std::sqrt(2.0), 1.0, 2.0}) {
    const auto model = ChannelModel::section_five_alpha(alpha);
    const auto r = optimize_capacity(model, known_symmetry_group(model), cfg);
    const double c = 2.0 * std::log((1.0 + 2.0 * alpha * alpha) / (2.0 * alpha));
    const double a = 1.0 / (2.0 * alpha * alpha);
    ComplexMatrix q = ComplexMatrix::Zero(2, 2);
    q(0, 0) = a;
    q(1, 1) = 1.0 - a;
    worst_c = std::max(worst_c, std::abs(r.capacity.value - c));
    worst_q = std::max(worst_q, max_abs(r.q_star.matrix() - q));
  }
  if (worst_c > 1e-4) fail(o, "capacity error " + fmt(worst_c));
  if (worst_q > 1e-4) fail(o, "q_star error " + fmt(worst_q));
  if (o.pass) o.detail = "max capacity error " + fmt(worst_c) + ", max q_star error " + fmt(worst_q);
  return o;
}

Outcome ac2() {
  Outcome o;
  const std::string cfg = R"({"channel":{"kind":"sec5_inf"},"opt":{"conv_tol":1e-10}})";
  const std::string seed = std::to_string(kSeed);
  std::vector<const char*> argv = {"symcap", "capacity", "--set", cfg.c_str(), "--seed", seed.c_str(), "--output", "-"};
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) {
    fail(o, "exit code " + std::to_string(code) + " " + err.str());
    return o;
  }
  const std::string text = out.str();
  const auto report = nlohmann::json::parse(text.substr(text.find("\n{") + 1));
  const double c = report["result"]["capacity"]["value"].get<double>();
  const ComplexMatrix q = matrix_from_json(report["result"]["q_star"]);
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(1, 1) = 1.0;
  const double cerr = std::abs(c - std::log(5.0));
  const double qerr = max_abs(q - expected);
  if (cerr > 1e-6) fail(o, "capacity error " + fmt(cerr));
  if (qerr > 1e-6) fail(o, "q_star error " + fmt(qerr));
  if (o.pass) o.detail = "capacity error " + fmt(cerr) + ", q_star error " + fmt(qerr);
  return o;
}

Outcome ac3() {
  Outcome o;
  RandomStream rng(kSeed, 3);
  const UnitaryMatrix w3 = haar_sample(G::full_unitary(3), rng);
  const UnitaryMatrix w4 = haar_sample(G::full_unitary(4), rng);
  ComplexMatrix flip = ComplexMatrix::Identity(2, 2);
  flip(1, 1) = -1.0;
  ComplexMatrix swap = ComplexMatrix::Zero(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  const std::vector<G> groups = {
      G::full_unitary(4),
      G::full_unitary(6),
      G::conjugated_torus(w3),
      G::diagonal_torus(5),
      G::permutations(4),
      G::sign_flips(3),
      G::signed_permutations(3),
      G::finite({UnitaryMatrix::identity(2), UnitaryMatrix(flip), UnitaryMatrix(swap), UnitaryMatrix(flip * swap),
                 UnitaryMatrix(swap * flip), UnitaryMatrix(-ComplexMatrix::Identity(2, 2)),
                 UnitaryMatrix(-flip), UnitaryMatrix(-swap)},
                group::Semantics::kGroup),
      G::tensor(G::full_unitary(2), G::sign_flips(2)),
      G::tensor(G::diagonal_torus(2), G::permutations(3)),
      G::direct_sum({G::full_unitary(2), G::permutations(2)}),
      G::conjugated(w4, G::signed_permutations(4)),
      G::trivial(3),
  };
  constexpr int kDraws = 100000;
  constexpr int kMatrices = 20;
  double worst_mc = 0.0, worst_alg = 0.0;
  for (const auto& g : groups) {
    const int n = g.dim();
    std::vector<ComplexMatrix> as(kMatrices), sums(kMatrices, ComplexMatrix::Zero(n, n));
    for (auto& a : as) a = random_hermitian(n, rng);
    for (int s = 0; s < kDraws; ++s) {
      const ComplexMatrix f = haar_sample(g, rng).matrix();
      for (int k = 0; k < kMatrices; ++k) sums[k].noalias() += f * as[k] * f.adjoint();
    }
    for (int k = 0; k < kMatrices; ++k) {
      const ComplexMatrix closed = average(g, as[k]);
      const double dev = max_abs(sums[k] / kDraws - closed) / as[k].norm();
      worst_mc = std::max(worst_mc, dev);
      if (dev > 5e-2) fail(o, g.describe() + ": Monte Carlo deviation " + fmt(dev) + " ||A||");

      const ComplexMatrix b = random_hermitian(n, rng);
      const CovarianceMatrix q = random_covariance(n, rng);
      const double idem = max_abs(average(g, closed) - closed);
      const double tr = std::abs(closed.trace() - as[k].trace());
      const double psd = std::max(0.0, -min_hermitian_eigenvalue(average(g, q.matrix())));
      const double adj = std::abs(trace_inner(closed, b) - trace_inner(as[k], average(g, b)));
      const double alg = std::max({idem, tr, psd, adj});
      worst_alg = std::max(worst_alg, alg);
      if (alg > 1e-10) fail(o, g.describe() + ": algebraic property off by " + fmt(alg));
    }
  }
  if (o.pass) {
    o.detail = std::to_string(groups.size()) + " groups, worst deviation " + fmt(worst_mc) +
               " ||A||, worst algebraic residual " + fmt(worst_alg);
  }
  return o;
}

Outcome ac4() {
  Outcome o;
  RandomStream rng(kSeed, 4);
  const auto model = ChannelModel::gaussian(2, 2);
  RealVector d(2);
  d << 0.9, 0.1;
  const auto q = CovarianceMatrix::diagonal(d);
  const auto samples = sample(model, rng, 100000);
  const auto pd = paired_difference(samples, average(G::full_unitary(2), q.matrix()), q.matrix());
  if (!(pd.value > 0.0 && pd.value > 3.0 * pd.std_error)) {
    fail(o, "D = " + fmt(pd.value) + ", se = " + fmt(pd.std_error));
  } else {
    o.detail = "D = " + fmt(pd.value) + " nats, " + fmt(pd.value / pd.std_error) + " std errors";
  }
  return o;
}

Outcome report_outcome(const VerificationReport& r, int* n_checks = nullptr) {
  Outcome o;
  for (const auto& c : r.checks) {
    if (!c.pass) fail(o, r.suite + ": " + c.description + " (margin " + fmt(c.margin) + ")");
  }
  if (n_checks) *n_checks += static_cast<int>(r.checks.size());
  return o;
}

Outcome ac5() {
  OptConfig cfg;
  cfg.seed = kSeed;
  int n = 0;
  RandomStream rng(kSeed, 5);
  const auto pairs = inclusion_pairs(rng);
  Outcome o = report_outcome(run_inclusion_suite(cfg, 50), &n);
  if (o.pass) o.detail = std::to_string(pairs.size()) + " pairs, " + std::to_string(n) + " checks";
  return o;
}

Outcome ac6() {
  OptConfig cfg;
  cfg.seed = kSeed;
  Outcome all;
  int n = 0;
  for (int k = 1; k <= 6; ++k) {
    const Outcome o = report_outcome(run_corollary_suite(k, cfg), &n);
    if (!o.pass) fail(all, o.detail);
  }
  if (all.pass) all.detail = "6 suites, " + std::to_string(n) + " checks";
  return all;
}

Outcome ac7() {
  Outcome o;
  RandomStream rng(kSeed, 7);
  const G haar = G::full_unitary(3);
  int isotropic = 0, singleton = 0;
  for (int i = 0; i < 20; ++i) {
    const UnitaryMatrix v1 = haar_sample(haar, rng);
    const UnitaryMatrix v2 = haar_sample(haar, rng);
    const auto r = check_two_symmetry_condition(v1, v2);
    if (r.isotropic_optimal) {
      ++isotropic;
    } else {
      fail(o, "pair " + std::to_string(i) + ": " + r.reason);
    }
    const auto s = intersect_torus_fixed_sets(unitary_eigendecomposition(v1).basis,
                                              unitary_eigendecomposition(v2).basis);
    const auto* point = s.as<reduced::Singleton>();
    if (point && max_abs(point->point.matrix() - ComplexMatrix::Identity(3, 3) / 3.0) < 1e-12) {
      ++singleton;
    } else {
      fail(o, "pair " + std::to_string(i) + ": intersection is " + s.describe());
    }
  }
  if (o.pass) o.detail = std::to_string(isotropic) + "/20 isotropic_optimal, " + std::to_string(singleton) + "/20 Singleton(I/3)";
  return o;
}

Outcome ac8() {
  Outcome o;
  const std::vector<long> sizes = {1000, 10000, 100000};
  struct Case {
    const char* name;
    ChannelModel model;
    FinitenessVerdict expected;
  };
  const std::vector<Case> cases = {
      {"gaussian(2,2)", ChannelModel::gaussian(2, 2), FinitenessVerdict::kFiniteLikely},
      {"H_1", ChannelModel::section_five_alpha(1.0), FinitenessVerdict::kFiniteLikely},
      {"exp_cauchy", ChannelModel::named_custom("exp_cauchy", 2, 2), FinitenessVerdict::kInfiniteSuspected},
  };
  std::string slopes;
  for (const auto& c : cases) {
    double lo = 1e300, hi = -1e300;
    for (std::uint64_t s = 0; s < 5; ++s) {
      RandomStream rng(kSeed + s, 8);
      const auto r = finiteness_diagnostic(c.model, sizes, rng);
      lo = std::min(lo, r.slope);
      hi = std::max(hi, r.slope);
      if (r.verdict != c.expected) {
        fail(o, std::string(c.name) + " seed " + std::to_string(kSeed + s) + ": " + to_string(r.verdict));
      }
    }
    slopes += std::string(slopes.empty() ? "" : ", ") + c.name + " slope " + fmt(lo) + ".." + fmt(hi);
  }
  if (o.pass) o.detail = "5 seeds; " + slopes;
  return o;
}

Outcome ac9() {
  Outcome o;
  RandomStream rng(kSeed, 9);
  const auto objective = SaaObjective::for_model(ChannelModel::gaussian(3, 3), 2000, rng);
  double worst = 0.0;
  for (int p = 0; p < 3; ++p) {
    const ComplexMatrix q = random_covariance(3, rng).matrix();
    const ComplexMatrix grad = objective.gradient(q);
    for (int k = 0; k < 10; ++k) {
      ComplexMatrix d = random_hermitian(3, rng);
      d -= d.trace() / 3.0 * ComplexMatrix::Identity(3, 3);
      d /= d.norm();
      const double h = 1e-5;
      const double fd = (objective.value(q + h * d) - objective.value(q - h * d)) / (2.0 * h);
      const double an = trace_inner(grad, d);
      worst = std::max(worst, std::abs(fd - an) / std::abs(an));
    }
  }
  if (worst > 1e-5) fail(o, "relative error " + fmt(worst));
  else o.detail = "30 directional derivatives, worst relative error " + fmt(worst);
  return o;
}

std::string verify_all_report(const std::string& path) {
  const std::string seed = std::to_string(kSeed);
  std::vector<const char*> argv = {"symcap", "verify", "all", "--seed", seed.c_str(), "--output", path.c_str()};
  std::ostringstream out, err;
  cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  std::ifstream in(path, std::ios::binary);
  std::string text, line;
  while (std::getline(in, line)) {
    if (line.find("\"timestamp\":") == std::string::npos) text += line + '\n';
  }
  std::filesystem::remove(path);
  return text;
}

Outcome ac10() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path();
  const std::string a = verify_all_report((dir / "symcap_ac10_a.json").string());
  const std::string b = verify_all_report((dir / "symcap_ac10_b.json").string());
  if (a.empty()) fail(o, "no report written");
  else if (a != b) fail(o, "reports differ");
  else o.detail = std::to_string(a.size()) + " identical bytes outside the timestamp";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double limit_s;
  };
  const std::vector<Criterion> criteria = {
      {"closed-form H_alpha capacities", ac1, 5},
      {"H_inf capacity through the CLI", ac2, 5},
      {"closed-form averages vs Haar Monte Carlo", ac3, 60},
      {"paired gain of the averaged input", ac4, 10},
      {"fixed-point inclusions", ac5, 10},
      {"corollary suites", ac6, 300},
      {"two-symmetry pipeline on Haar pairs", ac7, 10},
      {"finiteness diagnostic", ac8, 60},
      {"analytic gradient vs finite differences", ac9, 5},
      {"deterministic verify all", ac10, 600},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto& c = criteria[k];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      fail(o, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) fail(o, "took " + fmt(secs) + " s, limit " + fmt(c.limit_s) + " s");
    std::printf("AC%zu %s: %s. %s [%.2f s]\n", k + 1, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
