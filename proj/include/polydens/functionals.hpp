#pragma once

// Regularity functionals of gridded densities and the inequality checks built
// from them.
//
// Densities are the exact step functions described in density.hpp, so omega,
// sigma, TV and KR below are exact for the step function itself; estimation
// error enters only through the ErrorBudget attached to each verdict.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polydens/chain_lp.hpp"
#include "polydens/density.hpp"
#include "polydens/poly.hpp"

namespace polydens {

/// Table eps_k -> value with strictly increasing eps.
struct ModulusCurve {
  std::vector<double> eps;
  std::vector<double> values;

  std::size_t size() const noexcept { return eps.size(); }
  /// eps strictly increasing; values finite, nondecreasing up to tol and at most 2 + tol.
  bool is_valid(double tol = 1e-9) const;
  /// Chord slopes nonincreasing up to tol.
  bool is_concave(double tol = 1e-9) const;
};

struct ErrorBudget {
  double tail = 0.0;   // probability mass outside the grid
  double bin = 0.0;    // step * sum |v_{i+1} - v_i|, the bin-bias proxy
  double noise = 0.0;  // half the L1 distance between half-sample histograms

  double total() const noexcept { return 2.0 * tail + bin + noise; }
};

struct DensityEstimate {
  GriddedDensity density;
  ErrorBudget budget;
};

/// Histogram plus budget. Noise comes from binning the halves [0, N/2) and
/// [N/2, N) on the same grid.
DensityEstimate estimate_density(std::span<const double> values, std::size_t bins, const RangePolicy& policy = {});
DensityEstimate estimate_density(std::span<const double> values, const GridSpec& grid);
DensityEstimate estimate_density(const StreamedHistogram& h);

/// Budget for an exact density: tail mass and bin bias, no noise.
ErrorBudget exact_budget(const GriddedDensity& rho);

/// step * sum_i |v_{i+k} - v_i| with values outside the grid taken as 0: the
/// L1 distance between rho and its shift by k bins.
double shift_l1(const GriddedDensity& rho, std::size_t k);

/// sup_{|h| <= eps} of the L1 distance between rho and rho(. + h). Real
/// shifts are handled exactly: between integer bin shifts the distance is
/// linear in h. Requires eps >= 2 * step.
double omega(const GriddedDensity& rho, double eps);
ModulusCurve omega_curve(const GriddedDensity& rho, std::span<const double> eps);

struct SigmaValue {
  double value = 0.0;
  /// Bound on what test functions could gain outside the grid.
  double tail_correction = 0.0;
};

/// sup of the integral of phi' rho over |phi| <= eps, |phi'| <= 1. The
/// supremum is attained by phi linear on each bin, so it is the chain LP over
/// the G+1 bin edges. eps <= 0 gives 0.
SigmaValue sigma_lp(const GriddedDensity& rho, double eps, LpMethod method = LpMethod::Sweep);
ModulusCurve sigma_curve(const GriddedDensity& rho, std::span<const double> eps, unsigned workers = 0);

/// per_decade points per factor of ten from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, unsigned per_decade);
/// 12 per decade over [max(2 * step, 1e-3), 1].
std::vector<double> default_probe_grid(double step);

/// Least-squares slope of log y against log x over entries with x, y > 0.
double log_log_slope(std::span<const double> x, std::span<const double> y);

struct Probe {
  double eps = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double budget = 0.0;
  std::string relation;

  bool pass() const noexcept { return rhs - lhs >= -budget; }
};

/// A scalar diagnostic that must land in [lo, hi].
struct Condition {
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  bool pass() const noexcept { return value >= lo && value <= hi; }
};

struct BoundReport {
  std::string id;
  std::vector<Probe> probes;
  std::vector<Condition> conditions;
  std::optional<double> fitted_constant;
  ErrorBudget budget;
  std::vector<std::string> notes;

  /// min over probes of rhs - lhs; +infinity without probes.
  double margin() const;
  /// Most negative rhs - lhs + budget over probes; +infinity without probes.
  double slack() const;
  bool pass() const;
  nlohmann::json to_json() const;
};

/// 0.5 * omega(2 eps) <= sigma(eps) <= 6 * omega(eps) at every probe.
BoundReport sandwich_check(const GriddedDensity& rho, std::span<const double> eps, const ErrorBudget& budget);

/// Half-open interval (a, b].
struct Interval {
  double a = 0.0;
  double b = 0.0;
};

/// Empirical P(W in A) <= sigma(rho, |A|) for each interval, with a binomial
/// band of four standard errors added to the budget.
BoundReport small_set_check(const EmpiricalCdf& cdf, const GriddedDensity& rho, std::span<const Interval> intervals,
                            const ErrorBudget& budget);

struct EnvelopeParams {
  unsigned m = 1;
  unsigned d = 1;
  double a = 1.0;
  /// Replaces the exponent 1/m; used to corrupt the envelope on purpose.
  std::optional<double> exponent;

  void validate() const;
  double power() const { return exponent ? *exponent : 1.0 / static_cast<double>(m); }
};

/// |ln u|^k for k > 0 and 0 for k = 0: when d = m the envelopes carry no
/// logarithmic term.
double envelope_log_term(double u, double k);

/// (eps/a)^(1/m) * (|ln(eps/a)|^(d-m) + 1), log term dropped when d = m.
double envelope_rhs(const EnvelopeParams& p, double eps);

struct EnvelopeFit {
  double constant = 0.0;        // max ratio
  std::vector<double> ratios;   // value / envelope per entry
  double value_slope = 0.0;     // log value against log eps
  double ratio_slope = 0.0;     // log ratio against log eps
};

EnvelopeFit fit_envelope_constant(const ModulusCurve& curve, const EnvelopeParams& p);

/// Entries with snr * noise <= value <= cap. Falls back to snr = 3 when fewer
/// than min_points survive and fails with EpsilonBelowResolution if that
/// still leaves too few.
ModulusCurve resolved_window(const ModulusCurve& curve, double noise, double cap, double snr = 10.0,
                             std::size_t min_points = 4);

/// Ratios of omega to the envelope must not trend upward as eps shrinks:
/// the log-ratio slope against log eps is at least -0.15 over the resolved
/// window.
BoundReport envelope_check(const ModulusCurve& omega, const EnvelopeParams& p, double noise);

/// sigma(eps) <= C(d) Var^(-1/2d) eps^(1/d): fits C(d) and requires the
/// log-log slope of sigma to be at least 1/d - 0.1.
BoundReport degree_fallback_check(const Polynomial& f, const ModulusCurve& sigma, double noise);

enum class GridAlignment { Strict, Rebin };

/// Both densities on one grid. Grids with equal steps and origins an integer
/// number of steps apart are padded; otherwise both are rebinned by exact
/// overlap onto the finer step (Strict fails with GridMismatch instead).
std::pair<GriddedDensity, GriddedDensity> align_grids(const GriddedDensity& x, const GriddedDensity& y,
                                                      GridAlignment alignment = GridAlignment::Rebin);

/// L1 distance of the densities, in [0, 2].
double tv_distance(const GriddedDensity& x, const GriddedDensity& y, GridAlignment alignment = GridAlignment::Rebin);

/// sup of the integral of phi (x - y) over |phi| <= 1, |phi'| <= 1, with phi
/// linear on each bin. Never exceeds tv_distance.
double kr_distance(const GriddedDensity& x, const GriddedDensity& y, GridAlignment alignment = GridAlignment::Rebin,
                   LpMethod method = LpMethod::Sweep);

/// TV <= 6 max(sigma_x(eps), sigma_y(eps)) + KR / eps for eps in (0, 1).
BoundReport tv_kr_inequality_check(const GriddedDensity& x, const GriddedDensity& y, std::span<const double> eps,
                                   const ErrorBudget& bx, const ErrorBudget& by);

/// (dkr/3)^(m/(m+1)) * |ln(dkr/3)|^((m-d)m/(m+1)).
double corollary_epsilon(double dkr, unsigned m, unsigned d);

/// dkr^(1/(m+1)) * (|ln dkr|^((d-m)m/(m+1)) + 1), log term dropped when d = m.
double corollary_rate(double dkr, unsigned m, unsigned d);

struct PerturbationPoint {
  double delta = 0.0;
  GriddedDensity x;
  GriddedDensity y;
  ErrorBudget bx;
  ErrorBudget by;
  double tv_noise = 0.0;  // from paired_tv_noise; 0 for exact laws
};

/// Monte Carlo noise in the L1 distance between histograms of two samples
/// drawn with common random numbers (x[k] and y[k] from the same Gaussian
/// draw). Half-sample split of the difference: 0.5 * step * L1(D_a - D_b),
/// D_a = hist(x_a) - hist(y_a). The independent budgets of x and y
/// overstate it because the shared draws cancel.
double paired_tv_noise(std::span<const double> x, std::span<const double> y, const GridSpec& grid);

/// For each member: the TV/KR inequality at corollary_epsilon(KR), and the
/// ratio TV / corollary_rate(KR). The ratios must not trend upward as delta
/// shrinks (log-ratio slope against log delta at least -0.15), fitted over
/// members whose TV is at least 10 * tv_noise (3 * tv_noise as a fallback).
/// Fails with EpsilonBelowResolution when fewer than two members qualify.
BoundReport corollary_check(std::span<const PerturbationPoint> family, unsigned m, unsigned d);

}  // namespace polydens
