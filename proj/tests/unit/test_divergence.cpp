#include <doctest.h>

#include <cmath>
#include <numbers>

#include "strichartz/divergence.hpp"

using namespace strichartz;

namespace {

constexpr double kPi = std::numbers::pi;

QSequence linear(int count, double a, double b) {
  QSequence s;
  for (int k = 0; k < count; ++k) s.entries.push_back({k, a + b * k});
  return s;
}

double slope_law(int n, double c, double energy) {
  return std::log(2.0) * std::pow(std::sin(critical_angle(c)), n - 3) / c * energy;
}

}  // namespace

TEST_CASE("growth fit on exact data") {
  const auto fit = growth_fit(linear(10, 2.0, 3.0), 10);
  CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(fit.intercept == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(fit.residual_rms < 1e-13);
  for (std::size_t w = 3; w <= 10; ++w)
    CHECK(growth_fit(linear(10, -1.0, 0.25), w).residual_rms < 1e-13);
  const auto flat = growth_fit(linear(6, 7.0, 0.0), 4);
  CHECK(flat.slope == doctest::Approx(0.0));
  CHECK(flat.residual_rms == 0.0);
}

TEST_CASE("growth fit rejects short or degenerate windows") {
  CHECK_THROWS_AS(growth_fit(linear(5, 0.0, 1.0), 6), ProbeError);
  CHECK_THROWS_AS(growth_fit(linear(5, 0.0, 1.0), 2), ProbeError);
  QSequence dup;
  for (int i = 0; i < 4; ++i) dup.entries.push_back({1, 1.0});
  CHECK_THROWS_AS(growth_fit(dup, 4), ProbeError);
}

TEST_CASE("falsification at n = 4 and n = 3") {
  const auto p = Profile::standard();
  const Mollifier m;
  for (int n : {3, 4}) {
    const auto r = falsification_probe(n, 2.0, p, m, 24);
    REQUIRE(std::holds_alternative<Divergent>(r.verdict));
    CHECK(std::get<Divergent>(r.verdict).slope ==
          doctest::Approx(slope_law(n, 2.0, kPi)).epsilon(0.05));
  }
}

TEST_CASE("subcritical speed and bad arguments") {
  const auto p = Profile::standard();
  const Mollifier m;
  const auto r = falsification_probe(4, 0.5, p, m, 24);
  REQUIRE(std::holds_alternative<Inconclusive>(r.verdict));
  CHECK(std::get<Inconclusive>(r.verdict).reason == "no critical angle");
  CHECK_THROWS_AS(falsification_probe(4, 2.0, p, m, 11), ProbeError);
  CHECK_THROWS_AS(falsification_probe(2, 2.0, p, m, 24), ProbeError);
}

TEST_CASE("c = 1 at n = 4 converges and is not called divergent") {
  const auto r = falsification_probe(4, 1.0, Profile::standard(), Mollifier{}, 24);
  CHECK_FALSE(std::holds_alternative<Divergent>(r.verdict));
}

TEST_CASE("verdicts are stable under dilation and profile family; slope scales as amplitude squared") {
  const Mollifier m;
  const auto p = Profile::standard();
  const double base = std::get<Divergent>(falsification_probe(4, 2.0, p, m, 24).verdict).slope;

  const auto dil = falsification_probe(4, 2.0, p.dilated(4.0), m, 24);
  CHECK(std::holds_alternative<Divergent>(dil.verdict));
  const auto bump = Profile::normalized(CompactBump{0.0, 1.0});
  const auto rb = falsification_probe(4, 2.0, bump, m, 24);
  REQUIRE(std::holds_alternative<Divergent>(rb.verdict));
  CHECK(std::get<Divergent>(rb.verdict).slope ==
        doctest::Approx(slope_law(4, 2.0, halfline_energy(bump))).epsilon(0.05));

  const auto tripled = falsification_probe(4, 2.0, p.scaled(3.0), m, 24);
  REQUIRE(std::holds_alternative<Divergent>(tripled.verdict));
  CHECK(std::get<Divergent>(tripled.verdict).slope == doctest::Approx(9.0 * base).epsilon(1e-6));
}

TEST_CASE("boundedness for q > 2") {
  const auto p = Profile::standard();
  const Mollifier m;
  for (auto [n, q] : {std::pair{4, 4.0}, std::pair{4, 3.0}, std::pair{5, 3.0}}) {
    const auto r = boundedness_probe(n, q, 2.0, p, m, 64);
    REQUIRE(std::holds_alternative<Bounded>(r.verdict));
    const auto cfg =
        ProbeConfig::time_exponent(n, q, 2.0, std::nullopt, AngularDomain::to_critical(2.0));
    const double limit = factorized_limit(cfg, p);
    const double est = std::get<Bounded>(r.verdict).limit_estimate;
    CHECK(est == doctest::Approx(limit).epsilon(0.01));
    CHECK(est <= limit * (1.0 + 1e-9));
  }
  CHECK_THROWS_AS(boundedness_probe(4, 2.0, 2.0, p, m, 64), ProbeError);
}

TEST_CASE("bounded limit estimates are nondecreasing in kmax") {
  const auto p = Profile::standard();
  const Mollifier m;
  const auto cfg =
      ProbeConfig::time_exponent(4, 4.0, 2.0, std::nullopt, AngularDomain::to_critical(2.0));
  const double limit = factorized_limit(cfg, p);
  double prev = 0.0;
  for (int kmax : {4, 8, 16, 32, 64}) {
    const auto r = boundedness_probe(4, 4.0, 2.0, p, m, kmax);
    const double last = r.sequence.entries.back().value;
    CHECK(last >= prev);
    CHECK(last <= limit * (1.0 + 1e-9));
    prev = last;
  }
}

TEST_CASE("epsilon sweeps") {
  std::vector<double> eps;
  for (double e = 1e-1; e > 5e-7; e /= 10.0) eps.push_back(e);
  const auto s4 = epsilon_sweep(4, 2.0, eps);
  REQUIRE(s4.fit);
  CHECK(s4.fit->b == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(0.02));
  const auto s3 = epsilon_sweep(3, 2.0, eps);
  REQUIRE(s3.fit);
  CHECK(s3.fit->b == doctest::Approx(0.5).epsilon(0.02));
  for (const auto& pt : s3.points) {
    const double exact = -0.5 * std::log(1.0 + 2.0 * std::cos(critical_angle(2.0) - pt.eps));
    CHECK(pt.value == doctest::Approx(exact).epsilon(1e-8));
  }

  const double span = critical_angle(2.0) - kPi / 2;
  const auto single = epsilon_sweep(4, 2.0, {span});
  CHECK(single.points.front().value == 0.0);
  CHECK_FALSE(single.fit);
  CHECK_THROWS_AS(epsilon_sweep(4, 2.0, {}), ProbeError);
  CHECK_THROWS_AS(epsilon_sweep(4, 2.0, {1e-3, 1e-2}), ProbeError);
  CHECK_THROWS_AS(epsilon_sweep(4, 2.0, {span * 1.01}), ProbeError);
}
