#pragma once

// Monte Carlo realizations of f(X) and gridded density estimates.
//
// A GriddedDensity is piecewise constant: bin i covers
// [lo + i*step, lo + (i+1)*step) and carries values[i]. Everything
// downstream (moduli, distances) treats it as that exact step function.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "polydens/poly.hpp"

namespace polydens {

struct SampleSet {
  std::vector<double> values;
  std::uint64_t seed = 0;

  std::size_t count() const noexcept { return values.size(); }
};

/// Samples are produced in fixed chunks of this many values; chunk c draws
/// from the counter stream (seed, c), so the result does not depend on the
/// number of workers.
inline constexpr std::size_t kSampleChunk = std::size_t{1} << 15;

SampleSet sample(const Polynomial& f, std::size_t count, std::uint64_t seed, unsigned workers = 0);

class GriddedDensity {
 public:
  GriddedDensity() = default;
  GriddedDensity(double lo, double step, std::vector<double> values);

  double lo() const noexcept { return lo_; }
  double step() const noexcept { return step_; }
  double hi() const noexcept { return lo_ + step_ * static_cast<double>(values_.size()); }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double center(std::size_t i) const noexcept { return lo_ + (static_cast<double>(i) + 0.5) * step_; }

  /// step * sum(values).
  double mass() const;

  /// Probability mass of the underlying law that falls outside the grid.
  double clipped_mass() const noexcept { return clipped_mass_; }
  void set_clipped_mass(double m) noexcept { clipped_mass_ = m; }

  std::optional<double> bandwidth() const noexcept { return bandwidth_; }
  void set_bandwidth(double h) noexcept { bandwidth_ = h; }

  /// True when values are finite, nonnegative and the mass lies in
  /// [1 - mass_tol, 1 + 1e-9].
  bool satisfies_mass_invariant(double mass_tol = 1e-3) const;

 private:
  double lo_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
  double clipped_mass_ = 0.0;
  std::optional<double> bandwidth_;
};

struct RangePolicy {
  double quantile = 1e-4;  // trimmed per side
  std::size_t pad_bins = 2;
  /// When set, the grid covers exactly [first, second) instead.
  std::optional<std::pair<double, double>> fixed;
};

struct GridSpec {
  double lo = 0.0;
  double step = 1.0;
  std::size_t size = 0;
};

/// Grid chosen by the policy for these values (quantile range plus padding).
GridSpec choose_grid(std::span<const double> values, std::size_t bins, const RangePolicy& policy = {});

/// Counts normalized by N * step on the policy's grid.
GriddedDensity histogram_density(std::span<const double> values, std::size_t bins, const RangePolicy& policy = {});
GriddedDensity histogram_density(const SampleSet& s, std::size_t bins, const RangePolicy& policy = {});
/// Histogram on an explicit grid; used to bin several sample sets alike.
GriddedDensity histogram_on_grid(std::span<const double> values, const GridSpec& grid);

/// Histogram of sample(f, count, seed) built chunk by chunk without keeping
/// the values, for runs too large to hold in memory. The halves [0, N/2) and
/// [N/2, N) are also binned separately (each normalized by its own count) to
/// estimate Monte Carlo noise.
struct StreamedHistogram {
  GriddedDensity density;
  GriddedDensity first_half;
  GriddedDensity second_half;
};
StreamedHistogram sample_histogram(const Polynomial& f, std::size_t count, std::uint64_t seed, const GridSpec& grid,
                                   unsigned workers = 0);

/// 0.9 * min(sd, IQR / 1.34) * N^(-1/5).
double silverman_bandwidth(std::span<const double> values);

/// Gaussian-kernel estimate averaged over each output bin. Samples are
/// linearly binned onto a grid four times finer than the output before
/// convolving.
GriddedDensity kde_density(const SampleSet& s, std::size_t bins, std::optional<double> bandwidth = std::nullopt,
                           const RangePolicy& policy = {});

enum class OracleKind { Normal, ChiSquare1, ProductNormal };

struct OracleSpec {
  OracleKind kind = OracleKind::Normal;
  double mean = 0.0;  // Normal only
  double sd = 1.0;    // Normal only
};

/// Parses "normal", "chisq1" or "product_normal"; fails with UnsupportedKind.
OracleKind parse_oracle_kind(std::string_view name);

double oracle_pdf(const OracleSpec& spec, double x);
double oracle_cdf(const OracleSpec& spec, double x);

enum class OracleSampling { BinAverage, Point };

/// Closed-form (or quadrature) density on a grid. BinAverage gives the exact
/// step-function projection, which stays finite at integrable singularities.
GriddedDensity oracle_density(const OracleSpec& spec, const GridSpec& grid,
                              OracleSampling sampling = OracleSampling::BinAverage);

/// Right-continuous empirical CDF.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::span<const double> values);
  explicit EmpiricalCdf(const SampleSet& s) : EmpiricalCdf(std::span<const double>(s.values)) {}

  double operator()(double x) const;
  /// Empirical P(a < W <= b); zero when b <= a.
  double probability(double a, double b) const;
  std::size_t count() const noexcept { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

}  // namespace polydens
