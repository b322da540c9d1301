#include "strichartz/profiles.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace strichartz {

namespace {

constexpr double kPi = std::numbers::pi;

// Unit-bump table: w in [0, 600] at spacing 0.05. Beyond 600 the transform is
// below 1e-16 of its peak.
constexpr double kBumpMaxFrequency = 600.0;
constexpr double kBumpSpacing = 0.05;
constexpr int kBumpTrapezoidIntervals = 1024;

// -ln(1e-30) for the Gaussian spectral cutoff, sqrt(2 ln 1e9) for the time window.
const double kGaussSpectralSigmas = std::sqrt(30.0 * std::log(10.0));
const double kGaussTimeSigmas = std::sqrt(2.0 * 9.0 * std::log(10.0));

double bump_l2_squared() {
  // Trapezoid on the even, flat-ended integrand is spectrally accurate.
  static const double value = [] {
    constexpr int n = 4096;
    const double h = 1.0 / n;
    quad::CompensatedSum s;
    s += 0.5 * std::pow(detail::unit_bump(0.0), 2);
    for (int j = 1; j < n; ++j) s += std::pow(detail::unit_bump(j * h), 2);
    return 2.0 * h * s.value();
  }();
  return value;
}

}  // namespace

namespace detail {

double unit_bump(double v) noexcept {
  const double r = 1.0 - v * v;
  return r > 0.0 ? std::exp(-1.0 / r) : 0.0;
}

std::pair<double, double> BumpSpectrum::direct(double w) {
  static const std::vector<double> samples = [] {
    std::vector<double> v(kBumpTrapezoidIntervals + 1);
    for (int j = 0; j <= kBumpTrapezoidIntervals; ++j)
      v[j] = unit_bump(static_cast<double>(j) / kBumpTrapezoidIntervals);
    return v;
  }();
  const double h = 1.0 / kBumpTrapezoidIntervals;
  const std::complex<double> step = std::polar(1.0, w * h);
  std::complex<double> phase = 1.0;
  double value = 0.5 * samples[0];
  double slope = 0.0;
  for (int j = 1; j < kBumpTrapezoidIntervals; ++j) {
    phase *= step;
    if (j % 64 == 0) phase = std::polar(1.0, w * h * j);
    value += phase.real() * samples[j];
    slope -= (j * h) * phase.imag() * samples[j];
  }
  return {2.0 * h * value, 2.0 * h * slope};
}

BumpSpectrum::BumpSpectrum() : max_frequency_(kBumpMaxFrequency), spacing_(kBumpSpacing) {
  const auto nodes = static_cast<std::size_t>(std::lround(max_frequency_ / spacing_)) + 1;
  value_.resize(nodes);
  slope_.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const auto [v, d] = direct(static_cast<double>(i) * spacing_);
    value_[i] = v;
    slope_[i] = d;
  }
}

const BumpSpectrum& BumpSpectrum::instance() {
  static const BumpSpectrum table;
  return table;
}

double BumpSpectrum::operator()(double w) const {
  w = std::abs(w);
  if (w >= max_frequency_) return 0.0;
  const double x = w / spacing_;
  const auto i = static_cast<std::size_t>(x);
  const double t = x - static_cast<double>(i);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * value_[i] + h10 * spacing_ * slope_[i] + h01 * value_[i + 1] +
         h11 * spacing_ * slope_[i + 1];
}

}  // namespace detail

Profile::Profile(ProfileFamily family, double amplitude) : family_(family), amplitude_(amplitude) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Gaussian>)
          require(f.width > 0.0 && std::isfinite(f.width), "gaussian width must be positive");
        else
          require(f.radius > 0.0 && std::isfinite(f.radius) && std::isfinite(f.center),
                  "bump radius must be positive");
      },
      family_);
  require(std::isfinite(amplitude_), "profile amplitude must be finite");
}

Profile Profile::normalized(ProfileFamily family) {
  const Profile unit(family, 1.0);
  return unit.scaled(1.0 / unit.l2_norm());
}

std::string Profile::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Gaussian>)
          os << "gaussian:width=" << f.width;
        else
          os << "bump:center=" << f.center << ",radius=" << f.radius;
      },
      family_);
  os << ",amplitude=" << amplitude_;
  return os.str();
}

double Profile::operator()(double t) const {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          const double x = t / f.width;
          return amplitude_ * std::exp(-0.5 * x * x);
        } else {
          return amplitude_ * detail::unit_bump((t - f.center) / f.radius);
        }
      },
      family_);
}

double Profile::fhat(double eta) const {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          const double x = f.width * eta;
          return amplitude_ * f.width * std::sqrt(2.0 * kPi) * std::exp(-0.5 * x * x);
        } else {
          return amplitude_ * f.radius * detail::BumpSpectrum::instance()(eta * f.radius);
        }
      },
      family_);
}

double Profile::l2_norm() const {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Gaussian>)
          return std::abs(amplitude_) * std::sqrt(f.width * std::sqrt(kPi));
        else
          return std::abs(amplitude_) * std::sqrt(f.radius * bump_l2_squared());
      },
      family_);
}

double Profile::spectral_cutoff() const {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Gaussian>)
          return kGaussSpectralSigmas / f.width;
        else
          return kBumpMaxFrequency / f.radius;
      },
      family_);
}

double Profile::time_extent() const {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Gaussian>)
          return kGaussTimeSigmas * f.width;
        else
          return f.radius;
      },
      family_);
}

double Profile::time_center() const {
  if (const auto* b = std::get_if<CompactBump>(&family_)) return b->center;
  return 0.0;
}

std::vector<double> Profile::spectral_features() const {
  if (const auto* g = std::get_if<Gaussian>(&family_))
    return {0.5 / g->width, 1.0 / g->width, 2.0 / g->width, 4.0 / g->width};
  const double r = std::get<CompactBump>(family_).radius;
  std::vector<double> out;
  for (double w = 2.0; w <= 128.0; w *= 2.0) out.push_back(w / r);
  return out;
}

Profile Profile::scaled(double factor) const { return Profile(family_, amplitude_ * factor); }

Profile Profile::dilated(double mu) const {
  require(mu > 0.0, "dilation factor must be positive");
  return std::visit(
      [&](const auto& f) -> Profile {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Gaussian>)
          return Profile(Gaussian{f.width / mu}, amplitude_ * std::sqrt(mu));
        else
          return Profile(CompactBump{f.center / mu, f.radius / mu}, amplitude_ * std::sqrt(mu));
      },
      family_);
}

double fhat_eval(const Profile& p, double eta) { return p.fhat(eta); }

namespace {

// Panel boundaries for eta-integrals of |fhat|^2 on [0, spectral_cutoff].
std::vector<double> spectral_breakpoints(const Profile& p) {
  const double top = p.spectral_cutoff();
  std::vector<double> pts{0.0};
  if (std::holds_alternative<Gaussian>(p.family())) {
    const double w = std::get<Gaussian>(p.family()).width;
    for (double x : {0.5, 1.0, 2.0, 4.0}) pts.push_back(x / w);
  } else {
    // The bump transform oscillates; one panel per unit of eta * radius.
    const double r = std::get<CompactBump>(p.family()).radius;
    for (double w = 2.0; w < kBumpMaxFrequency; w += 2.0) pts.push_back(w / r);
  }
  pts.push_back(top);
  return pts;
}

}  // namespace

double weighted_halfline_energy(const Profile& p, double alpha, const quad::Options& opts) {
  if (alpha <= -1.0) {
    if (p.fhat(0.0) != 0.0)
      fail(ErrorCode::DivergentAtOrigin,
           "eta^alpha |fhat|^2 is not integrable at 0 for alpha = " + std::to_string(alpha));
    require(false, "alpha must exceed -1");
  }
  const auto pts = spectral_breakpoints(p);
  auto integrand = [&](double eta) {
    const double v = p.fhat_squared(eta);
    return alpha == 0.0 ? v : std::pow(eta, alpha) * v;
  };
  if (alpha >= 0.0) return quad::integrate(integrand, std::span<const double>(pts), opts).value;

  // Singular weight: substitute on the first panel only.
  const std::array<double, 2> head{pts[0], pts[1]};
  const double near = quad::integrate_power_left(integrand, head, alpha, opts).value;
  const double far =
      quad::integrate(integrand, std::span<const double>(pts).subspan(1), opts).value;
  return near + far;
}

double halfline_energy(const Profile& p, const quad::Options& opts) {
  const double energy = weighted_halfline_energy(p, 0.0, opts);
  if (const auto* g = std::get_if<Gaussian>(&p.family())) {
    // Tail past the cutoff: integral of C exp(-w^2 x^2) over (X, inf) < C exp(-w^2 X^2) / (2 w^2 X).
    const double x = p.spectral_cutoff();
    const double tail = p.fhat_squared(x) / (2.0 * g->width * g->width * x);
    if (tail > opts.rel_tol * energy)
      fail(ErrorCode::NonConvergence, "gaussian tail bound exceeds tolerance");
  }
  return energy;
}

Mollifier::Mollifier(double inner_radius, double outer_radius)
    : inner_(inner_radius), outer_(outer_radius) {
  require(inner_ > 0.0 && outer_ > inner_ && std::isfinite(outer_),
          "mollifier radii must satisfy 0 < inner < outer");
}

double Mollifier::operator()(double eta) const noexcept {
  const double r = std::abs(eta);
  if (r <= inner_) return 1.0;
  if (r >= outer_) return 0.0;
  const double a = std::exp(-1.0 / (outer_ - r));
  const double b = std::exp(-1.0 / (r - inner_));
  return a / (a + b);
}

double mollifier_eval(const Mollifier& m, double eta) { return m(eta); }

}  // namespace strichartz
