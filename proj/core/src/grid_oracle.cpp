#include "strichartz/grid_oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <string>

#include "strichartz/reduced_integrals.hpp"

namespace strichartz {

namespace {

constexpr double kPi = std::numbers::pi;
// Relative slack between the symbol's support and the lattice Nyquist frequency.
constexpr double kNyquistMargin = 1e-3;
// The auto grid refuses boxes smaller than this many profile spectral scales:
// coarser dual lattices cannot resolve the critical ray of width ~ 1/scale.
constexpr double kMinBoxInScales = 6.0;
// f outside the time window must be below this fraction of its peak.
constexpr double kTimeTailTolerance = 1e-8;
// Points per block in the time quadrature; phases are re-anchored every
// kReanchor nodes to bound recurrence drift.
constexpr std::size_t kBlock = 256;
constexpr int kReanchor = 128;

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))), size(n) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
  std::size_t size;
};

void transform(const GridSpec& g, FftwBuffer& buf, int sign) {
  std::vector<int> dims(static_cast<std::size_t>(g.n), g.points_per_axis);
  fftw_plan plan = fftw_plan_dft(g.n, dims.data(), buf.data, buf.data, sign, FFTW_ESTIMATE);
  if (!plan) fail(ErrorCode::InvalidArgument, "FFTW could not plan the transform");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

int signed_index(int i, int n) { return i < n / 2 ? i : i - n; }

// Integer lattice coordinates of a row-major flat index in FFT order.
template <class Out>
void lattice_coords(std::size_t flat, const GridSpec& g, Out& out) {
  for (int axis = g.n - 1; axis >= 0; --axis) {
    const auto q = static_cast<std::size_t>(g.points_per_axis);
    out[static_cast<std::size_t>(axis)] = signed_index(static_cast<int>(flat % q), g.points_per_axis);
    flat /= q;
  }
}

std::size_t flat_index(std::span<const int> coords, const GridSpec& g) {
  std::size_t flat = 0;
  for (int c : coords) {
    const int i = c < 0 ? c + g.points_per_axis : c;
    flat = flat * static_cast<std::size_t>(g.points_per_axis) + static_cast<std::size_t>(i);
  }
  return flat;
}

void validate_grid(const GridSpec& g, int max_n) {
  require(g.n >= 1 && g.n <= max_n, "grid dimension must lie in [1, " + std::to_string(max_n) + "]");
  require(g.points_per_axis >= 16 && std::has_single_bit(static_cast<unsigned>(g.points_per_axis)),
          "points_per_axis must be a power of two >= 16");
  require(g.box_halfwidth > 0.0 && std::isfinite(g.box_halfwidth), "box_halfwidth must be positive");
}

void check_nyquist(const GridSpec& g, const Mollifier& m, int k) {
  const double support = std::ldexp(m.outer_radius(), k);
  if (!(g.nyquist() > support))
    fail(ErrorCode::NyquistViolation,
         "Nyquist frequency " + std::to_string(g.nyquist()) +
             " does not exceed the symbol support " + std::to_string(support) + " at k = " +
             std::to_string(k));
}

double power(double r, double p) { return p == 0.0 ? 1.0 : std::pow(r, p); }

}  // namespace

double GridSpec::dual_spacing() const { return kPi / box_halfwidth; }
double GridSpec::nyquist() const { return kPi * points_per_axis / (2.0 * box_halfwidth); }
std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(points_per_axis);
  return total;
}

GridSpec GridSpec::for_cutoff(int n, int points_per_axis, int k, const Mollifier& m, double c,
                              const Profile& p) {
  GridSpec g;
  g.n = n;
  g.points_per_axis = points_per_axis;
  const double support = std::ldexp(m.outer_radius(), k);
  g.box_halfwidth = kPi * points_per_axis / (2.0 * support * (1.0 + kNyquistMargin));
  validate_grid(g, 4);
  const double min_box = kMinBoxInScales / p.spectral_features()[1];
  if (g.box_halfwidth < min_box)
    fail(ErrorCode::NyquistViolation,
         "cutoff k = " + std::to_string(k) + " needs a box of half-width " +
             std::to_string(g.box_halfwidth) + " on " + std::to_string(points_per_axis) +
             " points, below the minimum " + std::to_string(min_box));
  g.time_halfwidth = std::abs(p.time_center()) + p.time_extent();
  const double band = (1.0 + std::abs(c)) * support + p.spectral_cutoff();
  const double dt = 2.0 * kPi / band;
  g.time_nodes = static_cast<int>(std::ceil(2.0 * g.time_halfwidth / dt)) + 1;
  return g;
}

KernelSamples sample_mollifier_kernel(const Mollifier& m, int k, const GridSpec& g) {
  validate_grid(g, 4);
  check_nyquist(g, m, k);
  const std::size_t total = g.size();
  FftwBuffer buf(total);
  const double dxi = g.dual_spacing();
  const double scale = std::ldexp(1.0, -k);
  std::array<int, 4> coords{};
  for (std::size_t i = 0; i < total; ++i) {
    lattice_coords(i, g, coords);
    double r2 = 0.0;
    for (int a = 0; a < g.n; ++a) r2 += static_cast<double>(coords[a]) * coords[a];
    buf.data[i][0] = m(std::sqrt(r2) * dxi * scale);
    buf.data[i][1] = 0.0;
  }
  transform(g, buf, FFTW_BACKWARD);
  // h(x) = (2 pi)^-n sum chi exp(i x.xi) dxi^n; the symbol is real and even,
  // so the imaginary part is rounding noise and is dropped.
  const double norm = std::pow(dxi / (2.0 * kPi), g.n);
  KernelSamples out{g, k, std::vector<double>(total)};
  for (std::size_t i = 0; i < total; ++i) out.values[i] = norm * buf.data[i][0];
  return out;
}

double l1_mass(const KernelSamples& samples) {
  quad::CompensatedSum s;
  for (double v : samples.values) s += std::abs(v);
  return s.value() * std::pow(samples.grid.spacing(), samples.grid.n);
}

std::vector<std::complex<double>> kernel_symbol(const KernelSamples& samples) {
  const auto& g = samples.grid;
  FftwBuffer buf(samples.values.size());
  for (std::size_t i = 0; i < samples.values.size(); ++i) {
    buf.data[i][0] = samples.values[i];
    buf.data[i][1] = 0.0;
  }
  transform(g, buf, FFTW_FORWARD);
  const double cell = std::pow(g.spacing(), g.n);
  std::vector<std::complex<double>> out(samples.values.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = cell * std::complex<double>(buf.data[i][0], buf.data[i][1]);
  return out;
}

PlancherelCheck plancherel_check(const KernelSamples& samples) {
  const auto& g = samples.grid;
  quad::CompensatedSum space, freq;
  for (double v : samples.values) space += v * v;
  for (const auto& z : kernel_symbol(samples)) freq += std::norm(z);
  return {space.value() * std::pow(g.spacing(), g.n),
          freq.value() * std::pow(g.dual_spacing() / (2.0 * kPi), g.n)};
}

double dual_functional_direct(const MovingSource& src, double s, const GridSpec& g,
                              ZeroMode zero_mode) {
  validate_grid(g, 3);
  require(g.n >= 2, "direct mode needs n in {2, 3}");
  require(s >= 0.0 && s < 0.5 * g.n, "direct mode needs 0 <= s < n/2");
  require(src.direction.size() == static_cast<std::size_t>(g.n),
          "direction must have n components");
  double norm2 = 0.0;
  for (double w : src.direction) norm2 += w * w;
  require(std::abs(std::sqrt(norm2) - 1.0) <= 1e-12, "direction must be a unit vector");
  check_nyquist(g, src.mollifier, src.k);
  require(g.time_nodes >= 2 && g.time_halfwidth > 0.0, "time quadrature needs nodes and a window");

  const Profile& f = src.profile;
  const double peak = std::max(std::abs(f(f.time_center())), std::numeric_limits<double>::min());
  const double window_lo = -g.time_halfwidth;
  const double window_hi = g.time_halfwidth;
  if (std::abs(f(window_lo)) > kTimeTailTolerance * peak ||
      std::abs(f(window_hi)) > kTimeTailTolerance * peak ||
      f.time_center() - f.time_extent() < window_lo || f.time_center() + f.time_extent() > window_hi)
    fail(ErrorCode::TimeWindowTooSmall,
         "profile does not decay inside [-" + std::to_string(g.time_halfwidth) + ", " +
             std::to_string(g.time_halfwidth) + "]");

  const double dt = (window_hi - window_lo) / (g.time_nodes - 1);
  const double support = std::ldexp(src.mollifier.outer_radius(), src.k);
  const double band = (1.0 + std::abs(src.speed)) * support + f.spectral_cutoff();
  if (2.0 * kPi / dt < band)
    fail(ErrorCode::NyquistViolation, "time step " + std::to_string(dt) +
                                          " aliases frequencies up to " + std::to_string(band));

  const auto samples = sample_mollifier_kernel(src.mollifier, src.k, g);
  const auto symbol = kernel_symbol(samples);
  const double dxi = g.dual_spacing();

  // Trapezoid weights times profile values, restricted to where f is nonzero.
  std::vector<double> amp(static_cast<std::size_t>(g.time_nodes));
  int first = -1, last = -1;
  for (int j = 0; j < g.time_nodes; ++j) {
    const double w = (j == 0 || j == g.time_nodes - 1) ? 0.5 * dt : dt;
    amp[static_cast<std::size_t>(j)] = w * f(window_lo + j * dt);
    if (amp[static_cast<std::size_t>(j)] != 0.0) {
      if (first < 0) first = j;
      last = j;
    }
  }

  // Points inside the symbol's support.
  std::vector<std::size_t> index;
  std::vector<double> eta;
  std::array<int, 4> coords{};
  for (std::size_t i = 0; i < samples.values.size(); ++i) {
    lattice_coords(i, g, coords);
    double r2 = 0.0, along = 0.0;
    for (int a = 0; a < g.n; ++a) {
      const double x = coords[a] * dxi;
      r2 += x * x;
      along += src.direction[static_cast<std::size_t>(a)] * x;
    }
    const double r = std::sqrt(r2);
    if (r >= support) continue;
    index.push_back(i);
    eta.push_back(r + src.speed * along);
  }

  // |G(xi)|^2 = |hat h(xi) T(xi)|^2 with T(xi) = sum_j amp_j exp(-i t_j eta(xi)).
  std::vector<double> power_density(samples.values.size(), 0.0);
  if (first >= 0) {
    std::array<double, kBlock> zr{}, zi{}, sr{}, si{}, ar{}, ai{};
    for (std::size_t start = 0; start < index.size(); start += kBlock) {
      const std::size_t count = std::min(kBlock, index.size() - start);
      auto anchor = [&](int j) {
        const double t = window_lo + j * dt;
        for (std::size_t b = 0; b < count; ++b) {
          zr[b] = std::cos(t * eta[start + b]);
          zi[b] = -std::sin(t * eta[start + b]);
        }
      };
      for (std::size_t b = 0; b < count; ++b) {
        sr[b] = std::cos(dt * eta[start + b]);
        si[b] = -std::sin(dt * eta[start + b]);
        ar[b] = 0.0;
        ai[b] = 0.0;
      }
      anchor(first);
      for (int j = first; j <= last; ++j) {
        if (j != first && (j - first) % kReanchor == 0) anchor(j);
        const double a = amp[static_cast<std::size_t>(j)];
        for (std::size_t b = 0; b < count; ++b) {
          ar[b] += a * zr[b];
          ai[b] += a * zi[b];
          const double nr = zr[b] * sr[b] - zi[b] * si[b];
          const double ni = zr[b] * si[b] + zi[b] * sr[b];
          zr[b] = nr;
          zi[b] = ni;
        }
      }
      for (std::size_t b = 0; b < count; ++b) {
        const std::size_t i = index[start + b];
        power_density[i] = std::norm(symbol[i]) * (ar[b] * ar[b] + ai[b] * ai[b]);
      }
    }
  }

  const double p = 2.0 * s;
  quad::CompensatedSum sum;
  for (std::size_t i : index) {
    if (i == 0) continue;
    lattice_coords(i, g, coords);
    double r2 = 0.0;
    for (int a = 0; a < g.n; ++a) r2 += static_cast<double>(coords[a]) * coords[a];
    sum += power(std::sqrt(r2) * dxi, -p) * power_density[i];
  }
  double total = sum.value() * std::pow(dxi, g.n);

  if (zero_mode == ZeroMode::ZetaCorrected) {
    const double phi0 = power_density[0];
    double curvature = 0.0;
    std::array<int, 3> unit{};
    for (int a = 0; a < g.n; ++a) {
      unit.fill(0);
      unit[static_cast<std::size_t>(a)] = 1;
      const double plus = power_density[flat_index(std::span<const int>(unit.data(), g.n), g)];
      unit[static_cast<std::size_t>(a)] = -1;
      const double minus = power_density[flat_index(std::span<const int>(unit.data(), g.n), g)];
      curvature += (plus + minus - 2.0 * phi0) / (dxi * dxi);
    }
    total -= epstein_zeta(g.n, p) * std::pow(dxi, g.n - p) * phi0;
    total -= 0.5 * (curvature / g.n) * epstein_zeta(g.n, p - 2.0) * std::pow(dxi, g.n - p + 2.0);
  }
  return std::sqrt(std::max(0.0, total) / std::pow(2.0 * kPi, g.n));
}

double witness_ratio(int n, int k, double c, const Profile& p, const Mollifier& m,
                     const GridSpec& g, ZeroMode zero_mode) {
  require(g.n == n, "grid dimension does not match n");
  std::vector<double> omega(static_cast<std::size_t>(n), 0.0);
  omega[0] = 1.0;
  return witness_ratio(MovingSource{p, m, k, c, omega}, g, zero_mode);
}

double witness_ratio(const MovingSource& src, const GridSpec& g, ZeroMode zero_mode) {
  const double dual = dual_functional_direct(src, 0.5 * (g.n - 1), g, zero_mode);
  const double mass = l1_mass(sample_mollifier_kernel(src.mollifier, src.k, g));
  return dual / (src.profile.l2_norm() * mass);
}

double reduced_reference_squared(int n, int k, double c, double s, const Profile& p,
                                 const Mollifier& m, const quad::Options& opts) {
  const ProbeConfig cfg{n, c, s, k, AngularDomain::full()};
  return reduced_q_value(cfg, p, m, opts) * sphere_surface_measure(n - 2) /
         std::pow(2.0 * kPi, n);
}

double radial_reference_squared(int n, int k, double s, const Profile& p, const Mollifier& m,
                                const quad::Options& opts) {
  const double alpha = n - 1 - 2.0 * s;
  require(alpha > -1.0, "radial reference needs s < n/2");
  const double scale = std::ldexp(1.0, k);
  std::vector<double> pts{0.0};
  for (double f : p.spectral_features())
    if (f < scale * m.outer_radius()) pts.push_back(f);
  pts.push_back(scale * m.inner_radius());
  pts.push_back(scale * m.outer_radius());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto integrand = [&](double lambda) {
    const double chi = m(lambda / scale);
    return power(lambda, alpha) * chi * chi * p.fhat_squared(lambda);
  };
  double value = 0.0;
  if (alpha >= 0.0) {
    value = quad::integrate(integrand, std::span<const double>(pts), opts).value;
  } else {
    const std::array<double, 2> head{pts[0], pts[1]};
    value = quad::integrate_power_left(integrand, head, alpha, opts).value +
            quad::integrate(integrand, std::span<const double>(pts).subspan(1), opts).value;
  }
  return value * sphere_surface_measure(n - 1) / std::pow(2.0 * kPi, n);
}

double upper_incomplete_gamma(double a, double x) {
  require(x > 0.0, "upper incomplete gamma needs x > 0");
  // Modified Lentz evaluation of the continued fraction
  // Gamma(a, x) = exp(-x) x^a / (x + 1 - a - 1(1-a)/(x + 3 - a - ...)).
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return std::exp(-x + a * std::log(x)) * h;
  }
  fail(ErrorCode::NonConvergence, "incomplete gamma continued fraction did not converge");
}

double epstein_zeta(int n, double p) {
  require(n >= 1 && n <= 4, "epstein_zeta: n must lie in [1, 4]");
  require(p != static_cast<double>(n), "epstein_zeta has a pole at p = n");
  if (p == 0.0) return -1.0;
  if (p < 0.0 && std::fmod(p, 2.0) == 0.0) return 0.0;
  // Theta-function splitting at t = 1; terms decay like exp(-pi |m|^2).
  constexpr int reach = 6;
  const double a1 = 0.5 * p;
  const double a2 = 0.5 * (n - p);
  quad::CompensatedSum s;
  std::array<int, 4> m{};
  std::array<int, 4> lo{};
  lo.fill(-reach);
  m = lo;
  while (true) {
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) r2 += static_cast<double>(m[i]) * m[i];
    if (r2 > 0.0) {
      const double x = kPi * r2;
      s += upper_incomplete_gamma(a1, x) * std::pow(x, -a1);
      s += upper_incomplete_gamma(a2, x) * std::pow(x, -a2);
    }
    int axis = 0;
    while (axis < n && m[axis] == reach) m[axis++] = -reach;
    if (axis == n) break;
    ++m[axis];
  }
  const double bracket = s.value() + 2.0 / (p - n) - 2.0 / p;
  return std::pow(kPi, a1) / std::tgamma(a1) * bracket;
}

namespace {

template <class T>
void put(std::ostream& os, T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    os.write(bytes.data(), sizeof(T));
  } else {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
}

template <class T>
T get(std::istream& is) {
  std::array<char, sizeof(T)> bytes{};
  if (!is.read(bytes.data(), sizeof(T)))
    fail(ErrorCode::InvalidArgument, "truncated grid dump");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

constexpr std::array<char, 4> kMagic = {'S', 'F', 'G', 'D'};

}  // namespace

void write_grid_dump(std::ostream& os, std::span<const std::uint32_t> dims,
                     std::span<const double> values) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  require(total == values.size(), "grid dump: dims do not match value count");
  os.write(kMagic.data(), kMagic.size());
  put<std::uint16_t>(os, kGridDumpVersion);
  put<std::uint16_t>(os, static_cast<std::uint16_t>(dims.size()));
  for (auto d : dims) put<std::uint32_t>(os, d);
  for (double v : values) put<double>(os, v);
}

GridDump read_grid_dump(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    fail(ErrorCode::InvalidArgument, "not an SFGD grid dump");
  const auto version = get<std::uint16_t>(is);
  if (version != kGridDumpVersion)
    fail(ErrorCode::InvalidArgument, "unsupported grid dump version " + std::to_string(version));
  const auto n = get<std::uint16_t>(is);
  GridDump out;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    out.dims.push_back(get<std::uint32_t>(is));
    total *= out.dims.back();
  }
  out.values.reserve(total);
  for (std::size_t i = 0; i < total; ++i) out.values.push_back(get<double>(is));
  return out;
}

}  // namespace strichartz
