#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "symcap/channels.hpp"
#include "symcap/infocap.hpp"
#include "symcap/matrix_json.hpp"
#include "symcap/parallel.hpp"

using namespace symcap;
using G = SymmetryGroup;

namespace {

/// sup_x |F_a(x) - F_b(x)| evaluated at every sample point.
double brute_ks(const std::vector<double>& a, const std::vector<double>& b) {
  auto cdf = [](const std::vector<double>& v, double x) {
    return static_cast<double>(std::count_if(v.begin(), v.end(), [x](double y) { return y <= x; })) / v.size();
  };
  double d = 0.0;
  for (const auto* v : {&a, &b}) {
    for (double x : *v) d = std::max(d, std::abs(cdf(a, x) - cdf(b, x)));
  }
  return d;
}

double kolmogorov_q(double lambda) {
  double s = 0.0;
  for (int k = 1; k <= 200; ++k) s += 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return s;
}

}  // namespace

TEST_SUITE("channels") {
  TEST_CASE("entry laws") {
    RandomStream rng(31);
    for (int i = 0; i < 100; ++i) {
      const Complex t = EntryLaw::symmetric_two_point(0.7).draw(rng);
      CHECK(t.imag() == 0.0);
      CHECK(std::abs(std::abs(t.real()) - 0.7) < 1e-15);
      CHECK(std::abs(std::abs(EntryLaw::uniform_phase_radius(2.5).draw(rng)) - 2.5) < 1e-12);
    }
    CHECK_FALSE(EntryLaw::symmetric_two_point(1.0).circular());
    CHECK(EntryLaw::complex_gaussian().circular());
  }

  TEST_CASE("gaussian second moment") {
    RandomStream rng(32);
    const auto s = sample(ChannelModel::gaussian(2, 3, 0.5), rng, 20000);
    double m2 = 0.0;
    for (const auto& h : s) m2 += h.squaredNorm();
    CHECK(m2 / (s.size() * 6.0) == doctest::Approx(0.25).epsilon(0.02));
  }

  TEST_CASE("section-five samples have the stated shape") {
    RandomStream rng(33);
    for (const auto& h : sample(ChannelModel::section_five_alpha(2.0), rng, 50)) {
      CHECK(h(0, 0) == Complex(1.0));
      CHECK(std::abs(std::abs(h(1, 1)) - 2.0) < 1e-12);
      CHECK(h(0, 1) == Complex(0.0));
    }
    for (const auto& h : sample(ChannelModel::section_five_inf(), rng, 50)) {
      CHECK(h(1, 0) == Complex(1.0));
      CHECK(h.row(0).norm() == 0.0);
      CHECK(std::abs(std::abs(h(1, 1)) - 2.0) < 1e-12);
    }
  }

  TEST_CASE("sampling is seed-stable and thread-independent") {
    const auto model = ChannelModel::gaussian(2, 2);
    RandomStream a(34), b(34);
    set_thread_limit(1);
    const auto s1 = sample(model, a, 1000);
    set_thread_limit(3);
    const auto s2 = sample(model, b, 1000);
    set_thread_limit(0);
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1[i] == s2[i]);
    CHECK_THROWS(sample(model, a, 0));
  }

  TEST_CASE("factories validate their arguments") {
    CHECK_THROWS(ChannelModel::gaussian(0, 2));
    CHECK_THROWS(ChannelModel::section_five_alpha(0.0));
    CHECK_THROWS(ChannelModel::column_symmetric(UnitaryMatrix::identity(2), UnitaryMatrix::identity(3),
                                                {EntryLaw::complex_gaussian()}));
    CHECK_THROWS(ChannelModel::named_custom("nonexistent", 2, 2));
    auto wrong = ChannelModel::custom("wrong", 2, 2, [](RandomStream&) { return ComplexMatrix::Zero(3, 3).eval(); });
    RandomStream rng(35);
    CHECK_THROWS_AS(sample_one(wrong, rng), DimensionError);
  }

  TEST_CASE("declared symmetry groups") {
    CHECK(known_symmetry_group(ChannelModel::gaussian(3, 2)).as<group::FullUnitary>() != nullptr);
    CHECK(known_symmetry_group(ChannelModel::rank_one_product(2, 3, EntryLaw::complex_gaussian(),
                                                              EntryLaw::complex_gaussian())).dim() == 3);
    const auto two_point = known_symmetry_group(ChannelModel::rank_one_product(
        2, 3, EntryLaw::complex_gaussian(), EntryLaw::symmetric_two_point(1.0)));
    CHECK(two_point.as<group::SignFlips>() != nullptr);
    CHECK(known_symmetry_group(ChannelModel::section_five_alpha(1.0)).as<group::DirectSum>() != nullptr);
    CHECK_THROWS(known_symmetry_group(ChannelModel::named_custom("zero", 2, 2)));

    // Equal singular values merge into one signed-permutation block.
    ComplexMatrix hbar = ComplexMatrix::Identity(3, 3);
    hbar(2, 2) = 0.5;
    const auto ricean = known_symmetry_group(ChannelModel::ricean(hbar, 0.3));
    RealVector d(3);
    d << 0.4, 0.4, 0.2;
    const ComplexMatrix q = CovarianceMatrix::diagonal(d).matrix();
    CHECK(fixed_point_residual(ricean, q) < 1e-12);
    d << 0.5, 0.3, 0.2;
    CHECK(fixed_point_residual(ricean, CovarianceMatrix::diagonal(d).matrix()) > 1e-3);
  }

  TEST_CASE("brute-force KS distance") {
    RandomStream rng(36);
    for (int t = 0; t < 10; ++t) {
      std::vector<double> a(40 + t), b(55);
      for (auto& x : a) x = rng.normal();
      for (auto& x : b) x = rng.normal() + 0.3;
      if (t % 2) b[3] = a[5];  // a shared value
      CHECK(ks_distance(a, b) == doctest::Approx(brute_ks(a, b)).epsilon(1e-14));
    }
    CHECK(ks_distance({1.0, 2.0}, {1.0 + 1e-12, 2.0}, 1e-9) == 0.0);
  }

  TEST_CASE("KS p-value is the Kolmogorov tail") {
    const std::size_t n1 = 1000, n2 = 1000;
    const double ne = 500.0;
    const double scale = std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne);
    CHECK(ks_p_value(1.0 / scale, n1, n2) == doctest::Approx(kolmogorov_q(1.0)).epsilon(1e-10));
    CHECK(kolmogorov_q(1.0) == doctest::Approx(0.27).epsilon(0.001));
    CHECK(ks_p_value(0.0, n1, n2) == doctest::Approx(1.0));
    CHECK(ks_p_value(0.5, n1, n2) < 1e-50);
  }

  TEST_CASE("membership probe accepts group elements and rejects others") {
    RandomStream rng(37);
    const auto gauss = ChannelModel::gaussian(2, 3);
    const UnitaryMatrix v = haar_sample(G::full_unitary(3), rng);
    CHECK(membership_probe(gauss, v, 4000, rng).consistent);

    ComplexMatrix hbar = ComplexMatrix::Zero(2, 2);
    hbar(0, 0) = 3.0;
    hbar(1, 1) = 1.0;
    const auto ricean = ChannelModel::ricean(hbar, 0.5);
    ComplexMatrix flip = ComplexMatrix::Identity(2, 2);
    flip(0, 0) = -1.0;
    const auto in_group = membership_probe(ricean, UnitaryMatrix(flip), 4000, rng);
    CHECK(in_group.consistent);
    CHECK(in_group.n_probes == 8);
    const auto out = membership_probe(ricean, haar_sample(G::full_unitary(2), rng), 4000, rng);
    CHECK_FALSE(out.consistent);
    CHECK(out.p_value < out.level / 8.0);
    CHECK_THROWS(membership_probe(gauss, v, 10, rng));
  }

  TEST_CASE("block-invariant channel passes the probe for I (x) W") {
    // Each probe call rejects a true member about 1% of the time; the seed is fixed.
    RandomStream rng(39);
    ComplexMatrix a(2, 2);
    a << 1.0, 0.5, 0.0, 2.0;
    const auto model = ChannelModel::block_invariant(2, 2, 3, a);
    const UnitaryMatrix w = haar_sample(G::full_unitary(2), rng);
    const UnitaryMatrix v(kron(ComplexMatrix::Identity(2, 2), w.matrix()));
    CHECK(membership_probe(model, v, 4000, rng).consistent);
    const auto group = known_symmetry_group(model);
    CHECK(contains(group, v.matrix()));
  }

  TEST_CASE("exp_cauchy log-norm hook matches the sampler") {
    const auto model = ChannelModel::named_custom("exp_cauchy", 2, 2);
    RandomStream rng(39);
    int compared = 0;
    for (int t = 0; t < 200; ++t) {
      RandomStream copy = rng;
      const ComplexMatrix h = sample_one(model, rng);
      const double hook = log1p_norm_draw(model, copy);
      if (h.cwiseAbs().maxCoeff() < 1e150) {
        CHECK(hook == doctest::Approx(std::log1p(h.stableNorm())).epsilon(1e-12));
        ++compared;
      }
    }
    CHECK(compared > 150);
  }

  TEST_CASE("channel json round trip") {
    RandomStream rng(40);
    const UnitaryMatrix w2 = haar_sample(G::full_unitary(2), rng);
    ComplexMatrix hbar(2, 2);
    hbar << 1.0, Complex(0.0, 0.5), 0.0, 2.0;
    std::vector<ChannelModel> models = {
        ChannelModel::gaussian(2, 3, 0.7),
        ChannelModel::ricean(hbar, 0.3),
        ChannelModel::section_five_alpha(2.0),
        ChannelModel::section_five_inf(),
        ChannelModel::column_symmetric(w2, w2, {EntryLaw::complex_gaussian(2.0), EntryLaw::symmetric_two_point(1.0)}),
        ChannelModel::rank_one_product(2, 3, EntryLaw::uniform_phase_radius(1.5), EntryLaw::complex_gaussian()),
        ChannelModel::block_invariant(2, 2, 3, ComplexMatrix::Identity(2, 2)),
        ChannelModel::named_custom("exp_cauchy", 2, 2),
    };
    for (const auto& m : models) {
      CAPTURE(m.describe());
      const auto j = channel_to_json(m);
      const auto back = channel_from_json(j);
      CHECK(channel_to_json(back) == j);
      RandomStream a(41), b(41);
      CHECK(sample_one(m, a) == sample_one(back, b));
    }
    CHECK_THROWS(channel_from_json(nlohmann::json::parse(R"({"kind":"ricean"})")));
    CHECK_THROWS(channel_from_json(nlohmann::json::parse(R"({"kind":"warp"})")));
    const auto law = channel_from_json(nlohmann::json::parse(
        R"({"kind":"rank_one","m":2,"n":2,"law_m":"complex_gaussian","law_n":{"law":"symmetric_two_point","param":2}})"));
    CHECK(law.as<channel::RankOneProduct>()->law_n.param == 2.0);
  }
}
