#pragma once

// Direct evaluation of the dual functional on a periodic grid.
//
// The source F(t, x) = f(t) h_k(x - c t omega) is never reduced analytically
// here: h_k is sampled in space from its symbol, transformed back with an FFT,
// multiplied by the time quadrature of exp(-i t (|xi| + c omega.xi)) f(t), and
// the weighted L2 norm is summed over the dual lattice. Agreement with the
// (lambda, theta) engine therefore checks the Plancherel reduction together
// with every constant.
//
// Lattice sums of |xi|^{-2s} phi(xi) miss the integral by terms of order
// dxi^{n-2s} phi(0) and dxi^{n-2s+2} phi''(0). By default both are removed
// with Epstein zeta constants of the cubic lattice (the xi = 0 mode enters
// through them instead of being dropped); ZeroMode::Exclude gives the plain
// punctured sum.

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "strichartz/profiles.hpp"
#include "strichartz/quadrature.hpp"

namespace strichartz {

struct GridSpec {
  int n = 2;
  int points_per_axis = 128;
  double box_halfwidth = 6.0;
  int time_nodes = 0;
  double time_halfwidth = 0.0;

  double spacing() const { return 2.0 * box_halfwidth / points_per_axis; }
  double dual_spacing() const;
  double nyquist() const;
  std::size_t size() const;

  /// Largest box the Nyquist condition allows at cutoff k, and enough time
  /// nodes to keep the time quadrature free of aliasing over the symbol's
  /// support. Throws NyquistViolation when that box is too small for the
  /// dual lattice to resolve the profile's spectrum.
  static GridSpec for_cutoff(int n, int points_per_axis, int k, const Mollifier& m, double c,
                             const Profile& p);
};

struct MovingSource {
  Profile profile = Profile::standard();
  Mollifier mollifier;
  int k = 0;
  double speed = 2.0;
  std::vector<double> direction;  // unit vector in R^n
};

/// Spatial samples of h_k in FFT order (index 0 at x = 0), row-major.
struct KernelSamples {
  GridSpec grid;
  int k = 0;
  std::vector<double> values;
};

enum class ZeroMode { ZetaCorrected, Exclude };

KernelSamples sample_mollifier_kernel(const Mollifier& m, int k, const GridSpec& g);

/// Riemann sum of |h| with cell volume.
double l1_mass(const KernelSamples& samples);

/// hat h_k on the dual grid (FFT order) from the spatial samples.
std::vector<std::complex<double>> kernel_symbol(const KernelSamples& samples);

struct PlancherelCheck {
  double space = 0.0;      // sum |h|^2 dx^n
  double frequency = 0.0;  // (2 pi)^-n sum |hat h|^2 dxi^n
};
PlancherelCheck plancherel_check(const KernelSamples& samples);

double dual_functional_direct(const MovingSource& src, double s, const GridSpec& g,
                              ZeroMode zero_mode = ZeroMode::ZetaCorrected);

/// dual_functional_direct / (||f||_2 ||h_k||_1) with s = (n-1)/2, omega = e_1.
double witness_ratio(int n, int k, double c, const Profile& p, const Mollifier& m,
                     const GridSpec& g, ZeroMode zero_mode = ZeroMode::ZetaCorrected);
/// Same ratio for an arbitrary source direction.
double witness_ratio(const MovingSource& src, const GridSpec& g,
                     ZeroMode zero_mode = ZeroMode::ZetaCorrected);

/// (2 pi)^-n |S^{n-2}| reduced_q_value over [0, pi]: the continuum value of
/// dual_functional_direct squared.
double reduced_reference_squared(int n, int k, double c, double s, const Profile& p,
                                 const Mollifier& m, const quad::Options& opts = {});

/// c = 0: (2 pi)^-n |S^{n-1}| int lambda^{n-1-2s} chi(lambda/2^k)^2 |fhat(lambda)|^2.
double radial_reference_squared(int n, int k, double s, const Profile& p, const Mollifier& m,
                                const quad::Options& opts = {});

/// Analytic continuation of sum over nonzero m in Z^n of |m|^-p.
double epstein_zeta(int n, double p);

/// Upper incomplete gamma function for real a and x > 0.
double upper_incomplete_gamma(double a, double x);

// Debug dumps: "SFGD", u16 version, u16 n, u32 dims[n], then f64 values
// row-major, all little-endian.
struct GridDump {
  std::vector<std::uint32_t> dims;
  std::vector<double> values;
};
inline constexpr std::uint16_t kGridDumpVersion = 1;
void write_grid_dump(std::ostream& os, std::span<const std::uint32_t> dims,
                     std::span<const double> values);
GridDump read_grid_dump(std::istream& is);

}  // namespace strichartz
