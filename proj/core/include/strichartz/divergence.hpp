#pragma once

// Turning Q-sequences and epsilon sweeps into verdicts.
//
// A Divergent verdict is the numerical witness that the L2 L-infinity
// estimate fails for the moving-source family: Q_k grows like slope * k, so
// Q_k^{1/2} / (||f||_2 ||h_k||_1) is unbounded while ||h_k||_1 stays fixed.
// A Bounded verdict only says this family does not falsify the estimate; it
// is never a proof of the estimate.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "strichartz/profiles.hpp"
#include "strichartz/reduced_integrals.hpp"

namespace strichartz {

/// Decision rules for finite k. The asymptotic statements give no finite-k
/// thresholds, so these are ours.
struct VerdictRules {
  /// Divergent: slope > slope_sigmas * stderr over at least min_divergent_points.
  double slope_sigmas = 3.0;
  std::size_t min_divergent_points = 8;
  /// Divergent: the smallest increment in the fit window is at least this
  /// fraction of the largest. Logarithmic growth has constant increments; a
  /// convergent sequence has geometrically shrinking ones.
  double increment_persistence = 0.5;
  /// Bounded: Q_{k+1} - Q_k < bounded_rel_step * Q_k for bounded_points consecutive k.
  double bounded_rel_step = 1e-4;
  std::size_t bounded_points = 5;
  /// Fit window (last entries of the sequence).
  std::size_t window = 12;
};

struct Divergent {
  double slope = 0.0;
  double slope_stderr = 0.0;
};

struct Bounded {
  double limit_estimate = 0.0;
  double tail_bound = 0.0;
};

struct Inconclusive {
  std::string reason;
};

using Verdict = std::variant<Divergent, Bounded, Inconclusive>;

std::string verdict_kind(const Verdict& v);

struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double slope_stderr = 0.0;
};

/// Least squares Q_k ~ intercept + slope * k over the last `window` entries.
GrowthFit growth_fit(const QSequence& seq, std::size_t window);

struct FalsificationResult {
  QSequence sequence;
  std::optional<GrowthFit> fit;
  Verdict verdict;
};

FalsificationResult falsification_probe(int n, double c, const Profile& p, const Mollifier& m,
                                        int kmax, const VerdictRules& rules = {},
                                        const quad::Options& opts = {});

struct BoundednessResult {
  QSequence sequence;
  Verdict verdict;
};

/// Q_k at s = n/2 - 1/q over [pi/2, theta0] for k = 0, 1, ... until the
/// Bounded rule holds or k reaches kmax.
BoundednessResult boundedness_probe(int n, double q, double c, const Profile& p,
                                    const Mollifier& m, int kmax, const VerdictRules& rules = {},
                                    const quad::Options& opts = {});

struct SweepPoint {
  double eps = 0.0;
  double value = 0.0;
};

struct LogFit {
  double b = 0.0;  // coefficient of ln(1/eps)
  double a = 0.0;
};

struct EpsilonSweep {
  std::vector<SweepPoint> points;
  std::optional<LogFit> fit;  // needs two or more points
};

/// J(eps) = angular integral over [pi/2, theta0 - eps], fitted as a + b ln(1/eps).
EpsilonSweep epsilon_sweep(int n, double c, const std::vector<double>& eps,
                           const quad::Options& opts = {});

}  // namespace strichartz
