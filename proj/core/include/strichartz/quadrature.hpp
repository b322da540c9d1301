#pragma once

// Adaptive Gauss-Kronrod quadrature on panel lists.
//
// Panels are refined by global error: the panel with the largest estimate is
// bisected until the summed estimate meets the tolerance or the panel budget
// runs out. The final value is re-accumulated in order of panel position with
// compensated summation, so results do not depend on the refinement order.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "strichartz/error.hpp"

namespace strichartz::quad {

struct Options {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  std::size_t max_panels = 1'000'000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
};

/// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600323747305, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7, 9).
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel evaluate_panel(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 21> fv{};
  fv[20] = f(center);
  for (std::size_t i = 0; i < 10; ++i) {
    const double dx = half * kKronrodNodes[i];
    fv[2 * i] = f(center - dx);
    fv[2 * i + 1] = f(center + dx);
  }
  double kronrod = kKronrodWeights[10] * fv[20];
  double gauss = 0.0;
  double abs_sum = kKronrodWeights[10] * std::abs(fv[20]);
  for (std::size_t i = 0; i < 10; ++i) {
    const double pair = fv[2 * i] + fv[2 * i + 1];
    kronrod += kKronrodWeights[i] * pair;
    abs_sum += kKronrodWeights[i] * (std::abs(fv[2 * i]) + std::abs(fv[2 * i + 1]));
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::abs(fv[20] - mean);
  for (std::size_t i = 0; i < 10; ++i)
    asc += kKronrodWeights[i] * (std::abs(fv[2 * i] - mean) + std::abs(fv[2 * i + 1] - mean));

  kronrod *= half;
  gauss *= half;
  asc *= std::abs(half);
  abs_sum *= std::abs(half);

  if (!std::isfinite(kronrod))
    fail(ErrorCode::NonConvergence,
         "non-finite integrand on [" + std::to_string(a) + ", " + std::to_string(b) + "]");

  // QUADPACK error scaling.
  double err = std::abs(kronrod - gauss);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double round = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  if (err < round) err = 0.0;
  return {a, b, kronrod, err};
}

}  // namespace detail

/// Integrates f over [points.front(), points.back()], with the interior
/// points as initial panel boundaries. Points must be nondecreasing.
template <class F>
Result integrate(F&& f, std::span<const double> points, const Options& opts = {}) {
  require(points.size() >= 2, "integrate: need at least two points");
  require(opts.rel_tol > 0.0 || opts.abs_tol > 0.0, "integrate: tolerance must be positive");

  std::priority_queue<detail::Panel> active;
  std::vector<detail::Panel> settled;
  double total = 0.0;
  double total_error = 0.0;
  std::size_t panels = 0;

  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    require(points[i] <= points[i + 1], "integrate: points must be nondecreasing");
    if (points[i] == points[i + 1]) continue;
    auto p = detail::evaluate_panel(f, points[i], points[i + 1]);
    total += p.value;
    total_error += p.error;
    ++panels;
    if (p.error > 0.0)
      active.push(p);
    else
      settled.push_back(p);
  }

  const auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

  while (!active.empty() && total_error > target()) {
    if (panels >= opts.max_panels)
      fail(ErrorCode::NonConvergence, "panel budget of " + std::to_string(opts.max_panels) +
                                          " exhausted (error estimate " +
                                          std::to_string(total_error) + ")");
    const detail::Panel worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Resolution limit of double; keep the panel as is.
      total_error -= worst.error;
      settled.push_back({worst.a, worst.b, worst.value, 0.0});
      continue;
    }
    auto left = detail::evaluate_panel(f, worst.a, mid);
    auto right = detail::evaluate_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    ++panels;
    for (const auto& p : {left, right}) {
      if (p.error > 0.0)
        active.push(p);
      else
        settled.push_back(p);
    }
  }

  while (!active.empty()) {
    settled.push_back(active.top());
    active.pop();
  }
  std::sort(settled.begin(), settled.end(),
            [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
  CompensatedSum value;
  CompensatedSum error;
  for (const auto& p : settled) {
    value += p.value;
    error += p.error;
  }
  return {value.value(), error.value(), panels};
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {}) {
  const std::array<double, 2> pts{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(pts), opts);
}

/// Integrates f over [points.front(), points.back()] when f behaves like
/// (x - a)^alpha near the left end a, alpha > -1. The substitution
/// x = a + (b - a) t^m with m = 1/(1 + alpha) makes the integrand bounded.
template <class F>
Result integrate_power_left(F&& f, std::span<const double> points, double alpha,
                            const Options& opts = {}) {
  require(points.size() >= 2, "integrate_power_left: need at least two points");
  require(alpha > -1.0, "integrate_power_left: exponent must exceed -1");
  const double a = points.front();
  const double width = points.back() - a;
  if (width <= 0.0) return {};
  const double m = 1.0 / (1.0 + alpha);
  std::vector<double> tpts;
  tpts.reserve(points.size());
  for (double x : points) tpts.push_back(std::pow(std::clamp((x - a) / width, 0.0, 1.0), 1.0 / m));
  tpts.front() = 0.0;
  tpts.back() = 1.0;
  auto g = [&](double t) {
    const double tm1 = std::pow(t, m - 1.0);
    return f(a + width * tm1 * t) * width * m * tm1;
  };
  return integrate(g, std::span<const double>(tpts), opts);
}

/// Breakpoints graded geometrically away from `anchor`: anchor + dir*first*ratio^j
/// for j = 0, 1, ... while the offset stays below `extent`. The returned list
/// is sorted ascending and excludes the anchor itself.
inline std::vector<double> geometric_points(double anchor, double first, double extent,
                                            double direction, double ratio = 2.0) {
  std::vector<double> out;
  if (first <= 0.0 || extent <= first) return out;
  for (double off = first; off < extent; off *= ratio) out.push_back(anchor + direction * off);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace strichartz::quad
