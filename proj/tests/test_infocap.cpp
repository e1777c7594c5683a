#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "symcap/infocap.hpp"
#include "symcap/parallel.hpp"

using namespace symcap;

TEST_SUITE("infocap") {
  TEST_CASE("scalar Rayleigh MI against quadrature") {
    // |h|^2 ~ Exp(1), so I = int_0^inf log(1 + x) e^-x dx.
    const double expected = oracle::simpson([](double x) { return std::log1p(x) * std::exp(-x); }, 0.0, 60.0, 200000);
    CHECK(expected == doctest::Approx(0.596347).epsilon(1e-6));
    RandomStream rng(51);
    const auto e = estimate_mi(ChannelModel::gaussian(1, 1), CovarianceMatrix::isotropic(1), 200000, rng);
    CHECK(std::abs(e.value - expected) < 4.0 * e.std_error);
    CHECK(e.std_error < 0.005);
    CHECK(e.n_samples == 200000);
    CHECK(e.seed == 51);
  }

  TEST_CASE("estimate matches a direct mean and standard error") {
    RandomStream rng(52);
    const auto samples = sample(ChannelModel::gaussian(2, 2), rng, 3000);
    const auto q = random_covariance(2, rng);
    double s = 0.0, s2 = 0.0;
    for (const auto& h : samples) {
      const double v = oracle::logdet_by_eigenvalues(h, q.matrix());
      s += v;
      s2 += v * v;
    }
    const double n = static_cast<double>(samples.size());
    const double mean = s / n;
    const double var = (s2 - n * mean * mean) / (n - 1.0);
    const auto e = estimate_mi(samples, q.matrix());
    CHECK(e.value == doctest::Approx(mean).epsilon(1e-12));
    CHECK(e.std_error == doctest::Approx(std::sqrt(var / n)).epsilon(1e-8));
  }

  TEST_CASE("estimates are deterministic across thread limits") {
    const auto model = ChannelModel::gaussian(3, 2);
    const auto q = CovarianceMatrix::isotropic(2);
    set_thread_limit(1);
    RandomStream a(53);
    const auto e1 = estimate_mi(model, q, 5000, a);
    set_thread_limit(4);
    RandomStream b(53);
    const auto e2 = estimate_mi(model, q, 5000, b);
    set_thread_limit(0);
    CHECK(e1.value == e2.value);
    CHECK(e1.std_error == e2.std_error);
  }

  TEST_CASE("paired difference is the mean of per-draw differences") {
    RandomStream rng(54);
    const auto samples = sample(ChannelModel::gaussian(2, 2), rng, 500);
    const auto qa = random_covariance(2, rng), qb = random_covariance(2, rng);
    double s = 0.0;
    for (const auto& h : samples) {
      s += oracle::logdet_by_eigenvalues(h, qa.matrix()) - oracle::logdet_by_eigenvalues(h, qb.matrix());
    }
    const auto d = paired_difference(samples, qa.matrix(), qb.matrix());
    CHECK(d.value == doctest::Approx(s / 500.0).epsilon(1e-10));
    CHECK(d.n_samples == 500);
    CHECK(paired_difference(samples, qa.matrix(), qa.matrix()).value == 0.0);
  }

  TEST_CASE("closed form for H_alpha") {
    RandomStream rng(55);
    for (double alpha : {1.0 / std::sqrt(2.0), 1.0, 2.0, 3.5}) {
      const auto model = ChannelModel::section_five_alpha(alpha);
      for (int t = 0; t < 5; ++t) {
        const auto q = random_covariance(2, rng);
        const ComplexMatrix& qm = q.matrix();
        const double cf = mi_closed_form_alpha(alpha, qm(0, 0).real(), qm(1, 1).real(), qm(1, 0));
        // The integrand does not depend on v: any single draw gives the expectation.
        CHECK(cf == doctest::Approx(oracle::logdet_by_eigenvalues(sample_one(model, rng), qm)).epsilon(1e-12));
      }
    }
    CHECK_THROWS(mi_closed_form_alpha(0.5, 0.5, 0.5, 0.0));
    CHECK_THROWS(mi_closed_form_alpha(1.0, 0.5, 0.5, 0.9));
  }

  TEST_CASE("closed form for H_inf against the circle average") {
    RandomStream rng(56);
    for (int t = 0; t < 10; ++t) {
      const auto q = random_covariance(2, rng);
      const ComplexMatrix& qm = q.matrix();
      const double a = qm(0, 0).real(), b = qm(1, 1).real();
      const Complex c = qm(1, 0);
      const double expected = oracle::circle_log_average(1.0 + a + 4.0 * b, 4.0 * std::abs(c));
      CHECK(std::abs(mi_closed_form_inf(a, b, c) - expected) < 1e-10);
    }
    CHECK(mi_closed_form_inf(0.0, 1.0, 0.0) == doctest::Approx(std::log(5.0)).epsilon(1e-14));
  }

  TEST_CASE("H_inf closed form agrees with Monte Carlo") {
    RandomStream rng(57);
    const auto q = random_covariance(2, rng);
    const auto e = estimate_mi(ChannelModel::section_five_inf(), q, 50000, rng);
    const ComplexMatrix& qm = q.matrix();
    CHECK(std::abs(e.value - mi_closed_form_inf(qm(0, 0).real(), qm(1, 1).real(), qm(1, 0))) < 4.0 * e.std_error);
  }

  TEST_CASE("input validation") {
    RandomStream rng(58);
    CHECK_THROWS(estimate_mi(ChannelModel::gaussian(2, 2), CovarianceMatrix::isotropic(2), 50, rng));
    CHECK_THROWS_AS(estimate_mi(ChannelModel::gaussian(2, 2), CovarianceMatrix::isotropic(3), 200, rng),
                    DimensionError);
  }

  TEST_CASE("mi json honors the unit") {
    MIEstimate e{std::log(2.0), 0.01, 100, 9};
    const auto j = to_json(e, 1.0 / std::log(2.0));
    CHECK(j["value"].get<double>() == doctest::Approx(1.0));
    CHECK(j["seed"].get<std::uint64_t>() == 9);
  }

  TEST_CASE("finiteness diagnostic") {
    const std::vector<long> sizes = {1000, 10000, 100000};
    RandomStream rng(59);
    const auto gauss = finiteness_diagnostic(ChannelModel::gaussian(2, 2), sizes, rng);
    CHECK(gauss.verdict == FinitenessVerdict::kFiniteLikely);
    CHECK(gauss.groups == 100);
    REQUIRE(gauss.running_means.size() == 3);

    const auto flat = finiteness_diagnostic(ChannelModel::section_five_alpha(1.0), sizes, rng);
    CHECK(flat.verdict == FinitenessVerdict::kFiniteLikely);
    // ||H||_F = sqrt(2) for every draw.
    CHECK(flat.running_means.back().second == doctest::Approx(std::log1p(std::sqrt(2.0))).epsilon(1e-12));
    CHECK(std::abs(flat.slope) < 1e-12);

    const auto heavy = finiteness_diagnostic(ChannelModel::named_custom("exp_cauchy", 2, 2), sizes, rng);
    CHECK(heavy.verdict == FinitenessVerdict::kInfiniteSuspected);
    CHECK(heavy.increasing);
    CHECK(heavy.slope > heavy.slope_threshold);

    CHECK(to_json(heavy)["heuristic"].get<bool>());
    CHECK(std::string(to_string(heavy.verdict)) == "infinite_suspected");
    CHECK_THROWS(finiteness_diagnostic(ChannelModel::gaussian(1, 1), {100, 50, 1000}, rng));
    CHECK_THROWS(finiteness_diagnostic(ChannelModel::gaussian(1, 1), {100, 1000}, rng));
  }
}
