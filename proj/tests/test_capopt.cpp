#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "symcap/capopt.hpp"

using namespace symcap;
using G = SymmetryGroup;

namespace {

ComplexMatrix random_tangent(int n, RandomStream& rng) {
  ComplexMatrix d = random_hermitian(n, rng);
  d -= d.trace() / static_cast<double>(n) * ComplexMatrix::Identity(n, n);
  return d / d.norm();
}

/// Constant channel: H = U diag(s) V*.
ChannelModel constant_channel(const ComplexMatrix& h) {
  return ChannelModel::custom("constant", static_cast<int>(h.rows()), static_cast<int>(h.cols()),
                              [h](RandomStream&) { return h; });
}

/// Grid-then-golden-section maximizer on [lo, hi].
template <class F>
std::pair<double, double> maximize_1d(F&& f, double lo, double hi) {
  double best = lo, best_val = f(lo);
  for (int i = 1; i <= 2000; ++i) {
    const double x = lo + (hi - lo) * i / 2000.0;
    if (const double v = f(x); v > best_val) best = x, best_val = v;
  }
  double a = std::max(lo, best - (hi - lo) / 2000.0), b = std::min(hi, best + (hi - lo) / 2000.0);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double c = b - r * (b - a), d = a + r * (b - a);
    (f(c) > f(d) ? b : a) = (f(c) > f(d) ? d : c);
  }
  const double x = 0.5 * (a + b);
  return f(x) > best_val ? std::pair{x, f(x)} : std::pair{best, best_val};
}

}  // namespace

TEST_SUITE("capopt") {
  TEST_CASE("gradient matches central differences") {
    RandomStream rng(61);
    const auto objective = SaaObjective::for_model(ChannelModel::gaussian(3, 3), 200, rng);
    for (int p = 0; p < 3; ++p) {
      const ComplexMatrix q = random_covariance(3, rng).matrix();
      const ComplexMatrix grad = objective.gradient(q);
      CHECK((grad - grad.adjoint()).norm() < 1e-12);
      for (int k = 0; k < 10; ++k) {
        const ComplexMatrix d = random_tangent(3, rng);
        const double h = 1e-5;
        const double fd = (objective.value(q + h * d) - objective.value(q - h * d)) / (2.0 * h);
        const double an = trace_inner(grad, d);
        CHECK(std::abs(fd - an) <= 1e-5 * std::max(1.0, std::abs(an)));
      }
    }
  }

  TEST_CASE("objective is concave along segments") {
    RandomStream rng(62);
    const auto objective = SaaObjective::for_model(ChannelModel::gaussian(2, 3), 100, rng);
    for (int t = 0; t < 20; ++t) {
      const ComplexMatrix q1 = random_covariance(3, rng).matrix(), q2 = random_covariance(3, rng).matrix();
      const double lambda = rng.uniform();
      CHECK(objective.value(lambda * q1 + (1 - lambda) * q2) >=
            lambda * objective.value(q1) + (1 - lambda) * objective.value(q2) - 1e-12);
    }
  }

  TEST_CASE("section-five objectives are exact") {
    RandomStream rng(63);
    const auto alpha = SaaObjective::for_model(ChannelModel::section_five_alpha(2.0), 1000, rng);
    CHECK(alpha.exact());
    CHECK(alpha.size() == 1);
    const auto inf = SaaObjective::for_model(ChannelModel::section_five_inf(), 1000, rng);
    CHECK(inf.exact());
    for (int t = 0; t < 5; ++t) {
      const ComplexMatrix q = random_covariance(2, rng).matrix();
      CHECK(inf.value(q) == doctest::Approx(mi_closed_form_inf(q(0, 0).real(), q(1, 1).real(), q(1, 0))).epsilon(1e-12));
      CHECK(alpha.value(q) == doctest::Approx(mi_closed_form_alpha(2.0, q(0, 0).real(), q(1, 1).real(), q(1, 0))).epsilon(1e-12));
    }
    CHECK_FALSE(SaaObjective::for_model(ChannelModel::gaussian(2, 2), 100, rng).exact());
  }

  TEST_CASE("closed-form capacities against a numeric maximizer") {
    for (double alpha : {1.0 / std::sqrt(2.0), 1.0, 2.0, 3.0}) {
      const auto [c, a_hat] = capacity_closed_form_alpha(alpha);
      const auto [a, best] = maximize_1d([&](double x) { return mi_closed_form_alpha(alpha, x, 1.0 - x, 0.0); }, 0.0, 1.0);
      CHECK(c == doctest::Approx(best).epsilon(1e-10));
      CHECK(std::abs(a_hat - a) < 1e-5);
    }
    // Off-diagonal mass only lowers the value: 4|c| enters as Y in log((X + sqrt(X^2 - Y^2)) / 2).
    const auto [a, best] = maximize_1d([](double x) { return oracle::circle_log_average(1.0 + x + 4.0 * (1.0 - x), 0.0); }, 0.0, 1.0);
    CHECK(capacity_closed_form_inf().first == doctest::Approx(best).epsilon(1e-12));
    CHECK(a < 1e-6);
  }

  TEST_CASE("water-filling on a constant channel") {
    RandomStream rng(64);
    const ComplexMatrix u = haar_sample(G::full_unitary(2), rng).matrix();
    const ComplexMatrix v = haar_sample(G::full_unitary(2), rng).matrix();
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(0, 0) = 2.0;
    s(1, 1) = 1.0;
    OptConfig cfg;
    cfg.n_saa_samples = 100;
    cfg.n_eval_samples = 100;
    cfg.conv_tol = 1e-11;
    cfg.seed = 1;
    const auto result = optimize_capacity(constant_channel(u * s * v.adjoint()), G::trivial(2), cfg);
    // Gains 4 and 1: 1/4 + p1 = 1 + p2 gives p = (0.875, 0.125).
    RealVector p(2);
    p << 0.875, 0.125;
    const ComplexMatrix expected = v * CovarianceMatrix::diagonal(p).matrix() * v.adjoint();
    CHECK(result.converged);
    CHECK((result.q_star.matrix() - expected).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(result.saa_value == doctest::Approx(std::log(4.5) + std::log(1.125)).epsilon(1e-10));
  }

  TEST_CASE("ascent is monotone and iterates stay in the reduced set") {
    RandomStream rng(65);
    const UnitaryMatrix w = haar_sample(G::full_unitary(3), rng);
    for (const auto& g : {G::trivial(3), G::conjugated_torus(w), G::direct_sum({G::full_unitary(2), G::trivial(1)})}) {
      CAPTURE(g.describe());
      const auto objective = SaaObjective::for_model(ChannelModel::ricean(complex_gaussian_matrix(2, 3, rng), 0.5), 300, rng);
      OptConfig cfg;
      OptimizerTrace trace;
      const auto result = optimize_objective(objective, g, cfg, &trace);
      CHECK(result.converged);
      REQUIRE(trace.values.size() >= 2);
      for (std::size_t i = 1; i < trace.values.size(); ++i) CHECK(trace.values[i] >= trace.values[i - 1] - 1e-14);
      for (double r : trace.fixed_residuals) CHECK(r <= 1e-9);
      CHECK(CovarianceMatrix::satisfies_invariants(result.q_star.matrix()));
    }
  }

  TEST_CASE("fixed step rule also converges") {
    RandomStream rng(66);
    const auto objective = SaaObjective::for_model(ChannelModel::gaussian(2, 2), 200, rng);
    OptConfig fixed;
    fixed.step_rule = StepRule::kFixed;
    fixed.fixed_step = 0.2;
    fixed.conv_tol = 1e-9;
    OptConfig back;
    back.conv_tol = 1e-9;
    const auto a = optimize_objective(objective, G::trivial(2), fixed);
    const auto b = optimize_objective(objective, G::trivial(2), back);
    CHECK(a.converged);
    CHECK(a.saa_value == doctest::Approx(b.saa_value).epsilon(1e-9));
  }

  TEST_CASE("symmetric optimum equals the unconstrained one") {
    // A Gaussian channel is invariant under every unitary, so two Haar tori already force I/N.
    RandomStream rng(67);
    const UnitaryMatrix w1 = haar_sample(G::full_unitary(3), rng), w2 = haar_sample(G::full_unitary(3), rng);
    const auto objective = SaaObjective::for_model(ChannelModel::gaussian(3, 3), 4000, rng);
    const auto torus = optimize_objective(objective, G::conjugated_torus(w1), OptConfig{});
    const auto full = optimize_objective(objective, G::trivial(3), OptConfig{});
    CHECK(torus.saa_value <= full.saa_value + 1e-10);
    CHECK(full.saa_value - objective.value(CovarianceMatrix::isotropic(3).matrix()) < 1e-3);
    const auto both = reduced::Singleton{CovarianceMatrix::isotropic(3)};
    CHECK(fixed_point_residual(G::conjugated_torus(w2), both.point.matrix()) < 1e-15);
  }

  TEST_CASE("reduced-set projection") {
    RandomStream rng(68);
    const UnitaryMatrix w = haar_sample(G::full_unitary(3), rng);
    for (const auto& g : {G::full_unitary(3), G::conjugated_torus(w), G::permutations(3), G::trivial(3),
                          G::tensor(G::full_unitary(1), G::sign_flips(3))}) {
      CAPTURE(g.describe());
      const ComplexMatrix x = random_hermitian(3, rng);
      const auto p = project_to_reduced_set(g, x);
      CHECK(fixed_point_residual(g, p.matrix()) < 1e-10);
      CHECK((project_to_reduced_set(g, p.matrix()).matrix() - p.matrix()).norm() < 1e-10);
      const auto s = averaged_set(g);
      for (int k = 0; k < 20; ++k) {
        CHECK((x - p.matrix()).norm() <= (x - embed(s, random_parameters(s, rng)).matrix()).norm() + 1e-10);
      }
    }
  }

  TEST_CASE("optimize_capacity is deterministic") {
    OptConfig cfg;
    cfg.seed = 5;
    cfg.n_saa_samples = 300;
    cfg.n_eval_samples = 1000;
    const auto model = ChannelModel::gaussian(2, 2);
    const auto a = optimize_capacity(model, G::trivial(2), cfg);
    const auto b = optimize_capacity(model, G::trivial(2), cfg);
    CHECK(a.q_star.matrix() == b.q_star.matrix());
    CHECK(a.capacity.value == b.capacity.value);
    CHECK(a.capacity.seed == 5);
    CHECK(to_json(a).dump() == to_json(b).dump());
  }

  TEST_CASE("verification helpers") {
    RandomStream rng(69);
    CHECK_THROWS(verify_inclusion(G::full_unitary(2), G::trivial(2), 5, rng));
    const auto ok = verify_inclusion(G::sign_flips(2), G::signed_permutations(2), 10, rng);
    CHECK(ok.pass());
    const auto prop = verify_prop1(ChannelModel::gaussian(2, 2), G::full_unitary(2), random_covariance(2, rng), 2000, rng);
    CHECK(prop.pass());
    CHECK(prop.checks.at(0).information);

    VerificationReport r;
    r.suite = "demo";
    r.seed = 3;
    r.add("a, with comma", true, 0.5, true);
    r.add("b", false, -1.0);
    CHECK_FALSE(r.pass());
    CHECK(to_csv_rows(r, 2.0) == "demo,\"a, with comma\",true,1,3\ndemo,b,false,-1,3\n");
    const auto j = to_json(r, 2.0);
    CHECK(j["checks"][0]["margin"].get<double>() == 1.0);
    CHECK(j["pass"].get<bool>() == false);
    CHECK(std::string(kCsvHeader) == "suite,check,pass,margin,seed");
  }

  TEST_CASE("built-in suites pass at a fixed seed") {
    OptConfig cfg;
    cfg.seed = 2024;
    CHECK(run_prop1_suite(cfg, 20000).pass());
    CHECK(run_inclusion_suite(cfg).pass());
    CHECK(run_section_five_suite(cfg).pass());
    for (int k = 1; k <= 6; ++k) {
      const auto r = run_corollary_suite(k, cfg);
      CAPTURE(r.suite);
      for (const auto& c : r.checks) {
        CAPTURE(c.description);
        CHECK(c.pass);
      }
    }
    CHECK_THROWS(run_corollary_suite(7, cfg));
  }
}
