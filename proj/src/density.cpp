#include "polydens/density.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <tuple>

#include "polydens/error.hpp"
#include "polydens/parallel.hpp"
#include "polydens/rng.hpp"
#include "polydens/simd/kernels.hpp"

namespace polydens {

SampleSet sample(const Polynomial& f, std::size_t count, std::uint64_t seed, unsigned workers) {
  require(count >= 1, Errc::InvalidArgument, "sample count must be positive");
  const PolynomialEvaluator eval(f);
  const std::size_t n = eval.dimension();
  SampleSet out;
  out.seed = seed;
  out.values.resize(count);
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    CounterStream rng(seed, c);
    std::vector<double> x(n);
    std::vector<double> scratch(eval.scratch_size());
    const std::size_t begin = c * kSampleChunk;
    const std::size_t end = std::min(count, begin + kSampleChunk);
    for (std::size_t k = begin; k < end; ++k) {
      for (auto& xi : x) xi = rng.normal();
      out.values[k] = eval(x.data(), scratch.data());
    }
  });
  return out;
}

GriddedDensity::GriddedDensity(double lo, double step, std::vector<double> values)
    : lo_(lo), step_(step), values_(std::move(values)) {
  require(std::isfinite(lo) && std::isfinite(step) && step > 0.0, Errc::InvalidArgument,
          "grid needs a finite origin and a positive step");
  require(!values_.empty(), Errc::InvalidArgument, "grid needs at least one bin");
}

double GriddedDensity::mass() const {
  return step_ * std::accumulate(values_.begin(), values_.end(), 0.0);
}

bool GriddedDensity::satisfies_mass_invariant(double mass_tol) const {
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) return false;
  }
  const double m = mass();
  return m >= 1.0 - mass_tol && m <= 1.0 + 1e-9;
}

namespace {

double order_statistic(std::vector<double>& scratch, double q) {
  const auto idx = static_cast<std::size_t>(std::llround(q * static_cast<double>(scratch.size() - 1)));
  std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(idx), scratch.end());
  return scratch[idx];
}

std::pair<double, double> trimmed_range(std::span<const double> values, double q) {
  require(!values.empty(), Errc::InvalidArgument, "no samples");
  std::vector<double> scratch(values.begin(), values.end());
  double lo = order_statistic(scratch, q);
  double hi = order_statistic(scratch, 1.0 - q);
  if (!(hi > lo)) {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    lo = *mn;
    hi = *mx;
  }
  if (!(hi > lo)) fail(Errc::DegenerateRange, "all samples are equal; the law has no density");
  return {lo, hi};
}

}  // namespace

GridSpec choose_grid(std::span<const double> values, std::size_t bins, const RangePolicy& policy) {
  require(bins >= 16, Errc::InvalidArgument, "need at least 16 bins");
  if (policy.fixed) {
    const auto [lo, hi] = *policy.fixed;
    require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, Errc::InvalidArgument, "fixed range must be increasing");
    return {lo, (hi - lo) / static_cast<double>(bins), bins};
  }
  require(policy.quantile >= 0.0 && policy.quantile < 0.5, Errc::InvalidArgument, "trim quantile must be in [0, 0.5)");
  require(2 * policy.pad_bins < bins, Errc::InvalidArgument, "padding leaves no interior bins");
  const auto [lo, hi] = trimmed_range(values, policy.quantile);
  const double step = (hi - lo) / static_cast<double>(bins - 2 * policy.pad_bins);
  return {lo - static_cast<double>(policy.pad_bins) * step, step, bins};
}

GriddedDensity histogram_on_grid(std::span<const double> values, const GridSpec& grid) {
  require(!values.empty(), Errc::InvalidArgument, "no samples");
  std::vector<double> counts(grid.size, 0.0);
  std::size_t clipped = 0;
  const double inv_step = 1.0 / grid.step;
  for (double v : values) {
    const double pos = std::floor((v - grid.lo) * inv_step);
    if (pos >= 0.0 && pos < static_cast<double>(grid.size)) {
      counts[static_cast<std::size_t>(pos)] += 1.0;
    } else {
      ++clipped;
    }
  }
  const double n = static_cast<double>(values.size());
  for (auto& c : counts) c /= n * grid.step;
  GriddedDensity out(grid.lo, grid.step, std::move(counts));
  out.set_clipped_mass(static_cast<double>(clipped) / n);
  return out;
}

StreamedHistogram sample_histogram(const Polynomial& f, std::size_t count, std::uint64_t seed, const GridSpec& grid,
                                   unsigned workers) {
  require(count >= 2, Errc::InvalidArgument, "need at least two samples");
  require(grid.size >= 1 && grid.step > 0.0, Errc::InvalidArgument, "grid needs bins and a positive step");
  const PolynomialEvaluator eval(f);
  const std::size_t n = eval.dimension();
  const std::size_t half = count / 2;
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  // Slots [0, G) and [G, 2G) count the two halves; 2G and 2G+1 count clipped values.
  const std::size_t g = grid.size;
  std::vector<std::uint64_t> total(2 * g + 2, 0);
  std::mutex merge;
  const double inv_step = 1.0 / grid.step;
  parallel_for(chunks, workers, [&](std::size_t c) {
    CounterStream rng(seed, c);
    std::vector<double> x(n);
    std::vector<double> scratch(eval.scratch_size());
    std::vector<std::uint32_t> local(2 * g + 2, 0);
    const std::size_t begin = c * kSampleChunk;
    const std::size_t end = std::min(count, begin + kSampleChunk);
    for (std::size_t k = begin; k < end; ++k) {
      for (auto& xi : x) xi = rng.normal();
      const double v = eval(x.data(), scratch.data());
      const std::size_t side = k < half ? 0 : 1;
      const double pos = std::floor((v - grid.lo) * inv_step);
      if (pos >= 0.0 && pos < static_cast<double>(g)) {
        ++local[side * g + static_cast<std::size_t>(pos)];
      } else {
        ++local[2 * g + side];
      }
    }
    const std::lock_guard lock(merge);
    for (std::size_t i = 0; i < local.size(); ++i) total[i] += local[i];
  });

  auto build = [&](std::size_t first, std::size_t last, std::size_t clipped, double n_side) {
    std::vector<double> values(g, 0.0);
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t s = first; s <= last; ++s) values[i] += static_cast<double>(total[s * g + i]);
      values[i] /= n_side * grid.step;
    }
    GriddedDensity rho(grid.lo, grid.step, std::move(values));
    rho.set_clipped_mass(static_cast<double>(clipped) / n_side);
    return rho;
  };
  const auto na = static_cast<double>(half), nb = static_cast<double>(count - half);
  StreamedHistogram out;
  out.density = build(0, 1, total[2 * g] + total[2 * g + 1], static_cast<double>(count));
  out.first_half = build(0, 0, total[2 * g], na);
  out.second_half = build(1, 1, total[2 * g + 1], nb);
  return out;
}

GriddedDensity histogram_density(std::span<const double> values, std::size_t bins, const RangePolicy& policy) {
  require(values.size() >= 10 * bins, Errc::InvalidArgument, "histogram needs at least 10 samples per bin");
  return histogram_on_grid(values, choose_grid(values, bins, policy));
}

GriddedDensity histogram_density(const SampleSet& s, std::size_t bins, const RangePolicy& policy) {
  return histogram_density(std::span<const double>(s.values), bins, policy);
}

double silverman_bandwidth(std::span<const double> values) {
  require(values.size() >= 2, Errc::InvalidArgument, "bandwidth needs at least two samples");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  const auto sums = simd::kernels().centered_sums(values, mean);
  const double sd = std::sqrt(std::max(0.0, sums.s2 - sums.s1 * sums.s1 / n) / (n - 1.0));
  std::vector<double> scratch(values.begin(), values.end());
  const double q1 = order_statistic(scratch, 0.25);
  const double q3 = order_statistic(scratch, 0.75);
  double spread = std::min(sd, (q3 - q1) / 1.34);
  if (!(spread > 0.0)) spread = sd;
  if (!(spread > 0.0)) fail(Errc::DegenerateRange, "all samples are equal; no bandwidth");
  return 0.9 * spread * std::pow(n, -0.2);
}

GriddedDensity kde_density(const SampleSet& s, std::size_t bins, std::optional<double> bandwidth,
                           const RangePolicy& policy) {
  require(s.count() >= 10 * bins, Errc::InvalidArgument, "estimate needs at least 10 samples per bin");
  require(bins >= 16, Errc::InvalidArgument, "need at least 16 bins");
  const std::span<const double> values(s.values);
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(values);
  require(std::isfinite(h) && h > 0.0, Errc::InvalidArgument, "bandwidth must be positive");

  double lo, hi;
  if (policy.fixed) {
    std::tie(lo, hi) = *policy.fixed;
  } else {
    std::tie(lo, hi) = trimmed_range(values, policy.quantile);
    // At least one fine node of padding, so no sample is linearly binned
    // onto the outermost nodes (which straddle the range edge).
    const double pad = std::max(4.0 * h, (hi - lo) / static_cast<double>(2 * bins));
    lo -= pad;
    hi += pad;
  }
  const double step = (hi - lo) / static_cast<double>(bins);
  constexpr std::size_t kRefine = 4;
  const std::size_t nodes = kRefine * bins + 1;
  const double fine = step / kRefine;

  // Linear binning onto the fine nodes, stored reversed for the correlation.
  std::vector<double> rev(nodes, 0.0);
  std::size_t clipped = 0;
  for (double v : values) {
    const double pos = (v - lo) / fine;
    const double base = std::floor(pos);
    if (base < 0.0 || base >= static_cast<double>(nodes - 1)) {
      ++clipped;
      continue;
    }
    const auto b = static_cast<std::size_t>(base);
    const double frac = pos - base;
    rev[nodes - 1 - b] += 1.0 - frac;
    rev[nodes - 2 - b] += frac;
  }

  // weights[j] is the kernel averaged over a bin whose center lies
  // (j - M) * fine from the node, M = kRefine * bins + 2, so bin center g
  // sits at offset kRefine * g + 2 from node 0. Averaging keeps the mass
  // exact for bandwidths far below the step.
  const std::size_t offset = kRefine * bins + 2;
  std::vector<double> weights(2 * offset + 1);
  const double norm = 1.0 / (step * static_cast<double>(values.size()));
  const double half = 0.5 * step / h;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double u = (static_cast<double>(j) - static_cast<double>(offset)) * fine / h;
    weights[j] = norm * 0.5 * (std::erfc(-(u + half) / std::numbers::sqrt2) - std::erfc(-(u - half) / std::numbers::sqrt2));
  }
  const auto& k = simd::kernels();
  std::vector<double> out(bins);
  for (std::size_t g = 0; g < bins; ++g) {
    out[g] = k.dot(rev, std::span<const double>(weights).subspan(kRefine * g + kRefine, nodes));
  }
  GriddedDensity rho(lo, step, std::move(out));
  rho.set_bandwidth(h);
  rho.set_clipped_mass(std::max(0.0, 1.0 - rho.mass()));
  return rho;
}

EmpiricalCdf::EmpiricalCdf(std::span<const double> values) : sorted_(values.begin(), values.end()) {
  require(!sorted_.empty(), Errc::InvalidArgument, "empirical CDF needs samples");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::probability(double a, double b) const {
  if (!(b > a)) return 0.0;
  return (*this)(b) - (*this)(a);
}

}  // namespace polydens
