#pragma once

// Empirical characteristic functions of f(X) and their decay envelope.

#include <span>
#include <vector>

#include "polydens/density.hpp"
#include "polydens/functionals.hpp"

namespace polydens {

struct CfPoint {
  double t = 0.0;
  double modulus = 0.0;
  double std_error = 0.0;  // sqrt((1 - modulus^2) / N)
};

struct CfCurve {
  std::vector<CfPoint> points;
  std::size_t samples = 0;

  /// Moduli above 5 / sqrt(N) carry signal; below that they are Rayleigh noise.
  double noise_floor() const;
};

/// |N^-1 sum_k exp(i t v_k)| for each t. Parallel over t; each t reduces in a
/// fixed order, so results do not depend on the worker count.
CfCurve ecf_modulus(const SampleSet& s, std::span<const double> ts, unsigned workers = 0);
CfCurve ecf_modulus(std::span<const double> values, std::span<const double> ts, unsigned workers = 0);

/// Default t grid: 16 points per decade over [0.1, 1000].
std::vector<double> default_t_grid();

/// |a t|^(-1/m) * (|ln |a t||^(d-m) + 1), log term dropped when d = m.
double cf_envelope(const EnvelopeParams& p, double t);

/// Ratios modulus / cf_envelope over the points above the noise floor. The
/// fitted constant is their maximum. The verdict requires no upward trend:
/// the log-ratio slope against log t, fitted where |a t| >= 1, is at most 0.1.
/// Fails with InsufficientDecay when fewer than two points clear the floor
/// or they span less than a decade of t.
BoundReport cf_envelope_check(const CfCurve& curve, const EnvelopeParams& p);

/// Least-squares slope of log modulus against log t over points in [t_lo,
/// t_hi] that clear the noise floor.
double cf_decay_slope(const CfCurve& curve, double t_lo, double t_hi);

struct AlphaComparison {
  double from_envelope = 0.0;  // d - m
  double prior = 0.0;          // (3n - d/m)/2 - 1
};

AlphaComparison alpha_comparison(const EnvelopeParams& p, unsigned n);

}  // namespace polydens
