#include "strichartz/reduced_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace strichartz {

namespace {

constexpr double kPi = std::numbers::pi;

// Inner (radial) integrals run at a tighter tolerance than the outer one.
constexpr double kInnerTolFactor = 0.1;
// Smallest graded panel near the critical angle, relative to 2^-k / eta-scale.
constexpr double kNearCriticalFloor = 1e-3;

// Angular geometry. With a critical angle the outer variable is the signed
// gap d = theta0 - theta; 1 + c cos(theta) = 2 sin^2(d/2) + c sin(theta0) sin(d)
// has no cancellation as d -> 0.
struct Geometry {
  int n;
  double c;
  bool critical;
  double theta0 = 0.0;
  double sin0 = 0.0;

  Geometry(int n_, double c_) : n(n_), c(c_), critical(c_ >= 1.0) {
    if (critical) {
      theta0 = std::acos(-1.0 / c);
      sin0 = std::sqrt(std::max(0.0, 1.0 - 1.0 / (c * c)));
    }
  }

  double weight_theta(double theta) const {
    return n == 2 ? 1.0 : std::pow(std::max(0.0, std::sin(theta)), n - 2);
  }
  double u_theta(double theta) const { return 1.0 + c * std::cos(theta); }
  double weight_gap(double d) const { return weight_theta(theta0 - d); }
  double u_gap(double d) const {
    const double h = std::sin(0.5 * d);
    return 2.0 * h * h + c * sin0 * std::sin(d);
  }
};

void validate_domain(const AngularDomain& dom) {
  require(dom.lower >= 0.0 && dom.upper <= kPi && dom.lower <= dom.upper,
          "angular domain must satisfy 0 <= lower <= upper <= pi");
}

std::vector<double> with_grading(double lo, double hi, double first) {
  std::vector<double> pts{lo};
  if (first > 0.0) {
    for (double x : quad::geometric_points(lo, first, hi - lo, 1.0)) pts.push_back(x);
  }
  pts.push_back(hi);
  return pts;
}

// How the outer integrand behaves where 1 + c cos(theta) vanishes.
struct NearCritical {
  // Panel floor for a bounded integrand with structure down to this scale.
  double floor = 0.0;
  // Integrable power-law singularity d^alpha; takes precedence over `floor`.
  std::optional<double> alpha;
};

// Integral over gaps d in [lo, hi] (lo >= 0) of f(sign * d).
template <class F>
double integrate_gap_side(F& f, double lo, double hi, const NearCritical& near,
                          const quad::Options& opts) {
  if (hi <= lo) return 0.0;
  if (lo > 0.0) {
    // Distance lo from the critical angle: panels lo * 2^j.
    const auto pts = with_grading(lo, hi, lo);
    return quad::integrate(f, std::span<const double>(pts), opts).value;
  }
  if (near.alpha) {
    const std::array<double, 2> pts{0.0, hi};
    return quad::integrate_power_left(f, pts, *near.alpha, opts).value;
  }
  const auto pts = with_grading(0.0, hi, std::min(near.floor, 0.5 * hi));
  return quad::integrate(f, std::span<const double>(pts), opts).value;
}

// Integral over theta in the domain given as signed gaps [dlo, dhi] of
// weight(theta) * kernel(1 + c cos theta).
template <class Kernel>
double integrate_gaps(const Geometry& g, double dlo, double dhi, Kernel& kernel,
                      const NearCritical& near, const quad::Options& opts) {
  auto above = [&](double d) { return g.weight_gap(d) * kernel(g.u_gap(d)); };
  auto below = [&](double d) { return g.weight_gap(-d) * kernel(g.u_gap(-d)); };
  double total = 0.0;
  if (dhi > 0.0) total += integrate_gap_side(above, std::max(dlo, 0.0), dhi, near, opts);
  if (dlo < 0.0) total += integrate_gap_side(below, std::max(-dhi, 0.0), -dlo, near, opts);
  return total;
}

template <class Kernel>
double integrate_domain(const Geometry& g, const AngularDomain& dom, Kernel& kernel,
                        const NearCritical& near, const quad::Options& opts) {
  if (dom.lower == dom.upper) return 0.0;
  if (g.critical) return integrate_gaps(g, g.theta0 - dom.upper, g.theta0 - dom.lower, kernel, near, opts);
  auto f = [&](double theta) { return g.weight_theta(theta) * kernel(g.u_theta(theta)); };
  return quad::integrate(f, dom.lower, dom.upper, opts).value;
}

// Local exponent of weight * |u|^-p at the critical angle.
double critical_exponent(const Geometry& g, double p) {
  return g.sin0 > 0.0 ? -p : static_cast<double>(g.n - 2) - 2.0 * p;
}

bool touches_critical(const Geometry& g, const AngularDomain& dom) {
  return g.critical && dom.upper >= g.theta0;
}

}  // namespace

AngularDomain AngularDomain::to_critical(double c) {
  if (c < 1.0) return {0.5 * kPi, kPi};
  return {0.5 * kPi, std::min(std::acos(-1.0 / c), kPi)};
}

AngularDomain AngularDomain::full() { return {0.0, kPi}; }

ProbeConfig ProbeConfig::wave_dual(int n, double c, std::optional<int> k, AngularDomain dom) {
  return {n, c, 0.5 * (n - 1), k, dom};
}

ProbeConfig ProbeConfig::time_exponent(int n, double q, double c, std::optional<int> k,
                                       AngularDomain dom) {
  require(q > 0.0, "time exponent must be positive");
  return {n, c, 0.5 * n - 1.0 / q, k, dom};
}

void ProbeConfig::validate() const {
  require(n >= 2, "dimension must be at least 2");
  require(speed >= 0.0 && std::isfinite(speed), "speed must be nonnegative");
  require(std::isfinite(sobolev), "sobolev exponent must be finite");
  validate_domain(domain);
}

double critical_angle(double c) {
  if (!(c >= 1.0))
    fail(ErrorCode::NoCriticalAngle,
         "1 + c cos(theta) >= 1 - c > 0 for c = " + std::to_string(c));
  return std::acos(-1.0 / c);
}

double angular_integral(int n, double c, const AngularDomain& dom, const quad::Options& opts) {
  require(n >= 2, "dimension must be at least 2");
  validate_domain(dom);
  const Geometry g(n, c);
  if (touches_critical(g, dom))
    fail(ErrorCode::DomainTouchesSingularity, "upper angle reaches the critical angle");
  auto kernel = [](double u) { return 1.0 / u; };
  return integrate_domain(g, dom, kernel, {}, opts);
}

double angular_integral_to_gap(int n, double c, double theta_a, double gap,
                               const quad::Options& opts) {
  require(n >= 2, "dimension must be at least 2");
  const Geometry g(n, c);
  if (!g.critical) critical_angle(c);
  if (!(gap > 0.0))
    fail(ErrorCode::DomainTouchesSingularity, "gap to the critical angle must be positive");
  require(theta_a >= 0.0 && theta_a <= g.theta0, "lower angle must lie in [0, theta0]");
  const double dhi = g.theta0 - theta_a;
  if (gap >= dhi) return 0.0;
  auto kernel = [](double u) { return 1.0 / u; };
  return integrate_gaps(g, gap, dhi, kernel, {}, opts);
}

double weighted_angular_integral(int n, double c, const AngularDomain& dom, double exponent,
                                 const quad::Options& opts) {
  require(n >= 2, "dimension must be at least 2");
  validate_domain(dom);
  const Geometry g(n, c);
  NearCritical near;
  if (touches_critical(g, dom) && exponent > 0.0) {
    const double alpha = critical_exponent(g, exponent);
    if (alpha <= -1.0)
      fail(ErrorCode::DomainTouchesSingularity,
           "angular weight is not integrable at the critical angle");
    near.alpha = alpha;
  }
  auto kernel = [&](double u) { return std::pow(std::abs(u), -exponent); };
  return integrate_domain(g, dom, kernel, near, opts);
}

double reduced_q_value(const ProbeConfig& cfg, const Profile& p, const Mollifier& m,
                       const quad::Options& opts) {
  cfg.validate();
  const double alpha = cfg.n - 1 - 2.0 * cfg.sobolev;
  if (alpha <= -1.0) {
    if (p.fhat(0.0) != 0.0)
      fail(ErrorCode::DivergentAtOrigin,
           "lambda^" + std::to_string(alpha) + " is not integrable at lambda = 0");
    require(false, "sobolev exponent too large");
  }
  const Geometry g(cfg.n, cfg.speed);
  if (!cfg.cutoff && touches_critical(g, cfg.domain))
    fail(ErrorCode::DomainTouchesSingularity,
         "without a frequency cutoff the domain must stay below the critical angle");

  const double scale = cfg.cutoff ? std::ldexp(1.0, *cfg.cutoff) : 0.0;
  const double eta_cut = p.spectral_cutoff();
  const auto features = p.spectral_features();
  quad::Options inner_opts = opts;
  inner_opts.rel_tol = opts.rel_tol * kInnerTolFactor;
  inner_opts.abs_tol = 0.0;

  auto radial = [&](double u) {
    const double au = std::abs(u);
    double top = cfg.cutoff ? scale * m.outer_radius() : eta_cut / au;
    if (cfg.cutoff && au > 0.0) top = std::min(top, eta_cut / au);
    std::vector<double> pts{0.0};
    auto add = [&](double x) {
      if (x > 0.0 && x < top) pts.push_back(x);
    };
    if (au > 0.0)
      for (double f : features) add(f / au);
    if (cfg.cutoff) {
      add(scale * m.inner_radius());
      add(scale * m.outer_radius());
    }
    pts.push_back(top);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    auto integrand = [&](double lambda) {
      double v = p.fhat_squared(lambda * u);
      if (cfg.cutoff) {
        const double chi = m(lambda / scale);
        v *= chi * chi;
      }
      return alpha == 0.0 ? v : v * std::pow(lambda, alpha);
    };
    if (alpha >= 0.0)
      return quad::integrate(integrand, std::span<const double>(pts), inner_opts).value;
    const std::array<double, 2> head{pts[0], pts[1]};
    double v = quad::integrate_power_left(integrand, head, alpha, inner_opts).value;
    if (pts.size() > 2)
      v += quad::integrate(integrand, std::span<const double>(pts).subspan(1), inner_opts).value;
    return v;
  };

  NearCritical near;
  if (cfg.cutoff) near.floor = kNearCriticalFloor * features.front() / scale;
  return integrate_domain(g, cfg.domain, radial, near, opts);
}

QSequence q_sequence(const ProbeConfig& base, int kmin, int kmax, const Profile& p,
                     const Mollifier& m, const quad::Options& opts) {
  require(kmin <= kmax, "q_sequence: kmin must not exceed kmax");
  QSequence seq{{}, base};
  seq.entries.reserve(static_cast<std::size_t>(kmax - kmin + 1));
  for (int k = kmin; k <= kmax; ++k) {
    ProbeConfig cfg = base;
    cfg.cutoff = k;
    seq.entries.push_back({k, reduced_q_value(cfg, p, m, opts)});
  }
  return seq;
}

double factorized_value(int n, double c, const Profile& p, const AngularDomain& dom,
                        const quad::Options& opts) {
  const double angular = angular_integral(n, c, dom, opts);
  if (angular == 0.0) return 0.0;
  return halfline_energy(p, opts) * angular;
}

double factorized_limit(const ProbeConfig& cfg, const Profile& p, const quad::Options& opts) {
  cfg.validate();
  const double alpha = cfg.n - 1 - 2.0 * cfg.sobolev;
  const double angular =
      weighted_angular_integral(cfg.n, cfg.speed, cfg.domain, alpha + 1.0, opts);
  if (angular == 0.0) return 0.0;
  return weighted_halfline_energy(p, alpha, opts) * angular;
}

double n3_remark_value(double eps, const Profile& p, const quad::Options& opts) {
  require(eps > 0.0 && eps <= 2.0, "n3: eps must lie in (0, 2]");
  if (eps == 2.0) return 0.0;
  const double eta_cut = p.spectral_cutoff();
  const auto features = p.spectral_features();
  quad::Options inner_opts = opts;
  inner_opts.rel_tol = opts.rel_tol * kInnerTolFactor;
  auto radial = [&](double u) {
    const double top = eta_cut / u;
    std::vector<double> pts{0.0};
    for (double f : features)
      if (f / u < top) pts.push_back(f / u);
    pts.push_back(top);
    auto integrand = [&](double lambda) { return p.fhat_squared(lambda * u); };
    return quad::integrate(integrand, std::span<const double>(pts), inner_opts).value;
  };
  const auto pts = with_grading(eps, 2.0, eps);
  return quad::integrate(radial, std::span<const double>(pts), opts).value;
}

double n3_remark_closed_form(double eps, const Profile& p, const quad::Options& opts) {
  require(eps > 0.0 && eps <= 2.0, "n3: eps must lie in (0, 2]");
  return halfline_energy(p, opts) * std::log(2.0 / eps);
}

double sphere_surface_measure(int m) {
  require(m >= 0, "sphere dimension must be nonnegative");
  const double h = 0.5 * (m + 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

}  // namespace strichartz
