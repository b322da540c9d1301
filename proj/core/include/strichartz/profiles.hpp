#pragma once

// Time profiles f and the radial cutoff chi of the Littlewood-Paley projection.
//
// Fourier convention: fhat(eta) = integral of exp(-i t eta) f(t) dt, so that
// ||fhat||^2 = 2 pi ||f||^2.

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "strichartz/quadrature.hpp"

namespace strichartz {

struct Gaussian {
  double width = 1.0;
};

/// exp(-1 / (1 - ((t - center) / radius)^2)) inside the support, zero outside.
struct CompactBump {
  double center = 0.0;
  double radius = 1.0;
};

using ProfileFamily = std::variant<Gaussian, CompactBump>;

/// A real time profile amplitude * family(t).
class Profile {
 public:
  Profile(ProfileFamily family, double amplitude);

  /// The family member with unit L2 norm.
  static Profile normalized(ProfileFamily family);
  static Profile standard() { return normalized(Gaussian{1.0}); }

  const ProfileFamily& family() const noexcept { return family_; }
  double amplitude() const noexcept { return amplitude_; }
  std::string describe() const;

  double operator()(double t) const;

  /// For a Gaussian this is the Fourier transform itself. For a bump centered
  /// off zero the transform carries the phase exp(-i eta center); the value
  /// returned is exp(i eta center) fhat(eta), which is real with the same modulus.
  double fhat(double eta) const;
  double fhat_squared(double eta) const {
    const double v = fhat(eta);
    return v * v;
  }

  double l2_norm() const;
  /// Frequency beyond which |fhat|^2 is below 1e-30 of its peak.
  double spectral_cutoff() const;
  /// Frequencies (ascending, positive) at which |fhat|^2 changes character;
  /// used as panel boundaries by integrators.
  std::vector<double> spectral_features() const;
  /// Half-width of a symmetric time window outside which f is below 1e-9 of its peak.
  double time_extent() const;
  /// Largest |t - center| that matters; the window must contain center +- time_extent.
  double time_center() const;

  Profile scaled(double factor) const;
  /// mu^{1/2} f(mu t): preserves the L2 norm.
  Profile dilated(double mu) const;

 private:
  ProfileFamily family_;
  double amplitude_;
};

double fhat_eval(const Profile& p, double eta);

/// Integral of |fhat|^2 over (0, inf).
double halfline_energy(const Profile& p, const quad::Options& opts = {});

/// Integral of eta^alpha |fhat(eta)|^2 over (0, inf), alpha > -1.
double weighted_halfline_energy(const Profile& p, double alpha, const quad::Options& opts = {});

/// Radial cutoff with chi = 1 on [0, inner] and chi = 0 on [outer, inf).
class Mollifier {
 public:
  Mollifier() = default;
  Mollifier(double inner_radius, double outer_radius);

  double inner_radius() const noexcept { return inner_; }
  double outer_radius() const noexcept { return outer_; }

  double operator()(double eta) const noexcept;

 private:
  double inner_ = 1.0;
  double outer_ = 2.0;
};

double mollifier_eval(const Mollifier& m, double eta);

namespace detail {

/// Fourier transform of the unit bump exp(-1/(1-v^2)) on (-1, 1), tabulated
/// with value and slope on a uniform grid and read back by cubic Hermite
/// interpolation.
class BumpSpectrum {
 public:
  static const BumpSpectrum& instance();

  double operator()(double w) const;
  double max_frequency() const noexcept { return max_frequency_; }
  double node_spacing() const noexcept { return spacing_; }

  /// Direct trapezoidal evaluation (value, derivative) at w; used to fill the table.
  static std::pair<double, double> direct(double w);

 private:
  BumpSpectrum();
  double max_frequency_;
  double spacing_;
  std::vector<double> value_;
  std::vector<double> slope_;
};

double unit_bump(double v) noexcept;

}  // namespace detail

}  // namespace strichartz
