#include "strichartz/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace strichartz {

namespace {

struct LineFit {
  double slope;
  double intercept;
  double ssr;
  double sxx;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto m = static_cast<double>(x.size());
  quad::CompensatedSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx.value() / m;
  const double my = sy.value() / m;
  quad::CompensatedSum sxx, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy.value() / sxx.value();
  const double intercept = my - slope * mx;
  quad::CompensatedSum ssr;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ssr += r * r;
  }
  return {slope, intercept, ssr.value(), sxx.value()};
}

}  // namespace

std::string verdict_kind(const Verdict& v) {
  if (std::holds_alternative<Divergent>(v)) return "Divergent";
  if (std::holds_alternative<Bounded>(v)) return "Bounded";
  return "Inconclusive";
}

GrowthFit growth_fit(const QSequence& seq, std::size_t window) {
  if (window < 3) fail(ErrorCode::InsufficientData, "fit window must be at least 3");
  if (seq.entries.size() < window)
    fail(ErrorCode::InsufficientData, "sequence has " + std::to_string(seq.entries.size()) +
                                          " entries, window needs " + std::to_string(window));
  std::vector<double> k, q;
  for (auto it = seq.entries.end() - static_cast<std::ptrdiff_t>(window); it != seq.entries.end();
       ++it) {
    k.push_back(it->k);
    q.push_back(it->value);
  }
  auto sorted = k;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail(ErrorCode::InsufficientData, "fit window has repeated k");

  const auto line = least_squares(k, q);
  const auto m = static_cast<double>(window);
  return {line.slope, line.intercept, std::sqrt(line.ssr / m),
          std::sqrt(line.ssr / (m - 2.0) / line.sxx)};
}

FalsificationResult falsification_probe(int n, double c, const Profile& p, const Mollifier& m,
                                        int kmax, const VerdictRules& rules,
                                        const quad::Options& opts) {
  require(n >= 3, "falsification probe needs n >= 3");
  require(kmax >= 12, "falsification probe needs kmax >= 12");
  require(c > 0.0, "speed must be positive");

  const auto domain = AngularDomain::to_critical(c);
  const auto cfg = ProbeConfig::wave_dual(n, c, std::nullopt, domain);
  if (c < 1.0) return {QSequence{{}, cfg}, std::nullopt, Inconclusive{"no critical angle"}};

  FalsificationResult out{q_sequence(cfg, 0, kmax, p, m, opts), std::nullopt, Inconclusive{}};
  const std::size_t window = std::min(rules.window, out.sequence.entries.size());
  const auto fit = growth_fit(out.sequence, window);
  out.fit = fit;

  const auto& e = out.sequence.entries;
  double min_step = std::numeric_limits<double>::infinity();
  double max_step = 0.0;
  for (std::size_t i = e.size() - window + 1; i < e.size(); ++i) {
    const double d = e[i].value - e[i - 1].value;
    min_step = std::min(min_step, d);
    max_step = std::max(max_step, d);
  }

  const bool significant = fit.slope > 0.0 && fit.slope > rules.slope_sigmas * fit.slope_stderr;
  const bool enough = window >= rules.min_divergent_points;
  const bool persistent = max_step > 0.0 && min_step >= rules.increment_persistence * max_step;
  if (significant && enough && persistent) {
    out.verdict = Divergent{fit.slope, fit.slope_stderr};
  } else {
    std::ostringstream why;
    why << "growth criteria not met by k = " << kmax << " (slope " << fit.slope << ", stderr "
        << fit.slope_stderr << ", increment ratio "
        << (max_step > 0.0 ? min_step / max_step : 0.0) << ")";
    out.verdict = Inconclusive{why.str()};
  }
  return out;
}

BoundednessResult boundedness_probe(int n, double q, double c, const Profile& p,
                                    const Mollifier& m, int kmax, const VerdictRules& rules,
                                    const quad::Options& opts) {
  if (!(q > 2.0) || !std::isfinite(q))
    fail(ErrorCode::InvalidArgument, "time exponent q must lie in (2, inf); use falsify for q = 2");
  require(kmax >= 0, "kmax must be nonnegative");
  const auto cfg = ProbeConfig::time_exponent(n, q, c, std::nullopt, AngularDomain::to_critical(c));

  BoundednessResult out{QSequence{{}, cfg}, Inconclusive{}};
  auto& e = out.sequence.entries;
  for (int k = 0; k <= kmax; ++k) {
    ProbeConfig at = cfg;
    at.cutoff = k;
    e.push_back({k, reduced_q_value(at, p, m, opts)});
    if (e.size() < rules.bounded_points + 1) continue;

    bool settled = true;
    for (std::size_t i = e.size() - rules.bounded_points; i < e.size(); ++i)
      if (!(e[i].value - e[i - 1].value < rules.bounded_rel_step * e[i - 1].value)) settled = false;
    if (!settled) continue;

    // Geometric tail from the worst step ratio in the settled run.
    double ratio = 0.0;
    for (std::size_t i = e.size() - rules.bounded_points + 1; i < e.size(); ++i) {
      const double prev = std::abs(e[i - 1].value - e[i - 2].value);
      const double cur = std::abs(e[i].value - e[i - 1].value);
      if (prev > 0.0) ratio = std::max(ratio, cur / prev);
    }
    const double last_step = std::abs(e.back().value - e[e.size() - 2].value);
    const double tail = ratio < 1.0 ? last_step * ratio / (1.0 - ratio)
                                    : std::numeric_limits<double>::infinity();
    out.verdict = Bounded{e.back().value, tail};
    return out;
  }
  out.verdict = Inconclusive{"differences did not settle by k = " + std::to_string(kmax)};
  return out;
}

EpsilonSweep epsilon_sweep(int n, double c, const std::vector<double>& eps,
                           const quad::Options& opts) {
  require(!eps.empty(), "epsilon list is empty");
  const double theta0 = critical_angle(c);
  const double span = theta0 - 0.5 * std::numbers::pi;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    require(eps[i] > 0.0 && eps[i] <= span, "each eps must lie in (0, theta0 - pi/2]");
    if (i > 0) require(eps[i] < eps[i - 1], "eps values must be strictly decreasing");
  }
  EpsilonSweep out;
  for (double e : eps)
    out.points.push_back({e, angular_integral_to_gap(n, c, 0.5 * std::numbers::pi, e, opts)});
  if (out.points.size() >= 2) {
    std::vector<double> x, y;
    for (const auto& pt : out.points) {
      x.push_back(std::log(1.0 / pt.eps));
      y.push_back(pt.value);
    }
    const auto line = least_squares(x, y);
    out.fit = LogFit{line.slope, line.intercept};
  }
  return out;
}

}  // namespace strichartz
