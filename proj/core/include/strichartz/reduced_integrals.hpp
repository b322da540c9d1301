#pragma once

// The dual functional of the moving-source family after Plancherel, written in
// spherical coordinates (lambda = |xi|, theta = angle between xi and omega):
//
//   Q_k = int_{theta_a}^{theta_b} int_0^inf lambda^{n-1-2s} chi(lambda/2^k)^2
//           |fhat(lambda (1 + c cos theta))|^2 dlambda (sin theta)^{n-2} dtheta.
//
// The |S^{n-2}| and (2 pi)^{-n} factors are left out; grid_oracle puts them back.

#include <optional>
#include <vector>

#include "strichartz/profiles.hpp"
#include "strichartz/quadrature.hpp"

namespace strichartz {

struct AngularDomain {
  double lower = 0.0;
  double upper = 0.0;

  /// [pi/2, critical_angle(c)] clipped to [0, pi]; [pi/2, pi] when c < 1.
  static AngularDomain to_critical(double c);
  static AngularDomain full();
};

struct ProbeConfig {
  int n = 4;
  double speed = 2.0;
  double sobolev = 1.5;
  /// nullopt means no frequency cutoff (the k -> infinity limit).
  std::optional<int> cutoff;
  AngularDomain domain;

  /// s = (n - 1)/2, the weight of the L2 L-infinity dual estimate.
  static ProbeConfig wave_dual(int n, double c, std::optional<int> k, AngularDomain dom);
  /// s = n/2 - 1/q.
  static ProbeConfig time_exponent(int n, double q, double c, std::optional<int> k,
                                   AngularDomain dom);

  void validate() const;
};

struct QPoint {
  int k = 0;
  double value = 0.0;
};

struct QSequence {
  std::vector<QPoint> entries;
  ProbeConfig config;
};

/// arccos(-1/c), the zero of 1 + c cos(theta). Throws NoCriticalAngle for c < 1.
double critical_angle(double c);

/// Integral of (sin theta)^{n-2} / (1 + c cos theta) over a domain strictly
/// below the critical angle.
double angular_integral(int n, double c, const AngularDomain& dom, const quad::Options& opts = {});

/// angular_integral over [theta_a, critical_angle(c) - gap]; the gap is passed
/// exactly rather than through a rounded upper angle.
double angular_integral_to_gap(int n, double c, double theta_a, double gap,
                               const quad::Options& opts = {});

/// Integral of (sin theta)^{n-2} |1 + c cos theta|^{-exponent}. The domain may
/// reach or cross the critical angle when the singularity is integrable.
double weighted_angular_integral(int n, double c, const AngularDomain& dom, double exponent,
                                 const quad::Options& opts = {});

double reduced_q_value(const ProbeConfig& cfg, const Profile& p, const Mollifier& m,
                       const quad::Options& opts = {});

/// Q_k for k = kmin..kmax with the cutoff of `base` replaced.
QSequence q_sequence(const ProbeConfig& base, int kmin, int kmax, const Profile& p,
                     const Mollifier& m, const quad::Options& opts = {});

/// halfline_energy(p) * angular_integral(n, c, dom): the k -> infinity value of
/// reduced_q_value at s = (n - 1)/2.
double factorized_value(int n, double c, const Profile& p, const AngularDomain& dom,
                        const quad::Options& opts = {});

/// The k -> infinity value for general s: weighted_halfline_energy(p, n-1-2s)
/// times weighted_angular_integral(n, c, dom, n-2s).
double factorized_limit(const ProbeConfig& cfg, const Profile& p, const quad::Options& opts = {});

/// n = 3, c = 1 after u = 1 + cos(theta): the double integral of |fhat(lambda u)|^2
/// over u in [eps, 2], lambda > 0, by nested quadrature.
double n3_remark_value(double eps, const Profile& p, const quad::Options& opts = {});

/// E(f) * ln(2/eps).
double n3_remark_closed_form(double eps, const Profile& p, const quad::Options& opts = {});

/// Surface measure of the unit sphere S^m in R^{m+1}.
double sphere_surface_measure(int m);

}  // namespace strichartz
