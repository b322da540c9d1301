#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "strichartz/quadrature.hpp"

using namespace strichartz;

TEST_CASE("polynomials and smooth functions") {
  const auto r = quad::integrate([](double x) { return std::pow(x, 5); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  const auto s = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s.error < 1e-10);
}

TEST_CASE("empty and reversed-free intervals") {
  CHECK(quad::integrate([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("breakpoint lists integrate piecewise") {
  const std::vector<double> pts{0.0, 1.0, 2.0, 3.0};
  const auto r = quad::integrate([](double x) { return std::abs(x - 1.0); },
                                 std::span<const double>(pts));
  CHECK(r.value == doctest::Approx(0.5 + 2.0).epsilon(1e-14));
}

TEST_CASE("power singularity at the left end") {
  // int_0^1 x^{-0.9} e^x dx = sum_j 1 / (j! (j + 0.1)).
  double series = 0.0, fact = 1.0;
  for (int j = 0; j < 30; ++j) {
    if (j > 0) fact *= j;
    series += 1.0 / (fact * (j + 0.1));
  }
  const std::vector<double> pts{0.0, 0.5, 1.0};
  const auto r = quad::integrate_power_left(
      [](double x) { return std::pow(x, -0.9) * std::exp(x); }, std::span<const double>(pts), -0.9);
  CHECK(r.value == doctest::Approx(series).epsilon(1e-10));
  CHECK_THROWS_AS(quad::integrate_power_left([](double) { return 1.0; },
                                             std::span<const double>(pts), -1.0),
                  ProbeError);
}

TEST_CASE("logarithmic endpoint with geometric grading") {
  auto pts = quad::geometric_points(0.0, 1e-12, 1.0, 1.0);
  pts.insert(pts.begin(), 0.0);
  pts.push_back(1.0);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] > pts[i - 1]);
  const auto r = quad::integrate([](double x) { return x > 0.0 ? std::log(x) : 0.0; },
                                 std::span<const double>(pts));
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("budget exhaustion and non-finite values raise") {
  quad::Options tight;
  tight.max_panels = 4;
  tight.rel_tol = 1e-14;
  try {
    quad::integrate([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, tight);
    FAIL("expected NonConvergence");
  } catch (const ProbeError& e) {
    CHECK(e.code() == ErrorCode::NonConvergence);
  }
  CHECK_THROWS_AS(quad::integrate([](double) { return std::nan(""); }, 0.0, 1.0), ProbeError);
}

TEST_CASE("repeated runs are bitwise identical") {
  auto f = [](double x) { return std::exp(-x * x) / (1e-4 + x * x); };
  const auto a = quad::integrate(f, -3.0, 3.0);
  const auto b = quad::integrate(f, -3.0, 3.0);
  CHECK(a.value == b.value);
  CHECK(a.panels == b.panels);
}

TEST_CASE("compensated summation keeps low-order bits") {
  quad::CompensatedSum s;
  s += 1e16;
  s += 1.0;
  s += -1e16;
  CHECK(s.value() == 1.0);
}
