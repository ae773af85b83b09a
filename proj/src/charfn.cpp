#include "polydens/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polydens/error.hpp"
#include "polydens/parallel.hpp"
#include "polydens/simd/kernels.hpp"

namespace polydens {

double CfCurve::noise_floor() const { return samples == 0 ? 1.0 : 5.0 / std::sqrt(static_cast<double>(samples)); }

CfCurve ecf_modulus(std::span<const double> values, std::span<const double> ts, unsigned workers) {
  require(values.size() >= 10000, Errc::InvalidArgument, "characteristic function estimates need N >= 1e4");
  CfCurve curve;
  curve.samples = values.size();
  curve.points.resize(ts.size());
  const double n = static_cast<double>(values.size());
  const auto& k = simd::kernels();
  parallel_for(ts.size(), workers, [&](std::size_t i) {
    require(std::isfinite(ts[i]), Errc::InvalidArgument, "t must be finite");
    const auto sums = k.cf_sums(values, ts[i]);
    const double re = sums.re / n, im = sums.im / n;
    const double mod = std::hypot(re, im);
    curve.points[i] = {ts[i], mod, std::sqrt(std::max(0.0, 1.0 - mod * mod) / n)};
  });
  return curve;
}

CfCurve ecf_modulus(const SampleSet& s, std::span<const double> ts, unsigned workers) {
  return ecf_modulus(std::span<const double>(s.values), ts, workers);
}

std::vector<double> default_t_grid() { return geometric_grid(0.1, 1000.0, 16); }

double cf_envelope(const EnvelopeParams& p, double t) {
  p.validate();
  const double u = std::fabs(p.a * t);
  require(u > 0.0 && std::isfinite(u), Errc::InvalidArgument, "t must be nonzero");
  return std::pow(u, -p.power()) * (envelope_log_term(u, static_cast<double>(p.d - p.m)) + 1.0);
}

BoundReport cf_envelope_check(const CfCurve& curve, const EnvelopeParams& p) {
  p.validate();
  const double floor = curve.noise_floor();
  std::vector<double> ts, ratios, tail_ts, tail_ratios;
  for (const auto& pt : curve.points) {
    if (!(pt.t > 0.0) || pt.modulus <= floor) continue;
    ts.push_back(pt.t);
    ratios.push_back(pt.modulus / cf_envelope(p, pt.t));
    if (std::fabs(p.a * pt.t) >= 1.0) {
      tail_ts.push_back(pt.t);
      tail_ratios.push_back(ratios.back());
    }
  }
  if (ts.size() < 2) fail(Errc::InsufficientDecay, "fewer than two moduli clear the noise floor");
  if (ts.back() / ts.front() < 10.0 * (1.0 - 1e-12)) {
    fail(Errc::InsufficientDecay, "moduli above the noise floor span less than a decade of t");
  }
  if (tail_ts.size() < 3) {
    tail_ts = ts;
    tail_ratios = ratios;
  }
  BoundReport r;
  r.id = "cf_envelope";
  r.fitted_constant = *std::max_element(ratios.begin(), ratios.end());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    r.probes.push_back({ts[k], ratios[k] * cf_envelope(p, ts[k]), *r.fitted_constant * cf_envelope(p, ts[k]),
                        4.0 / std::sqrt(static_cast<double>(curve.samples)), "|phi(t)|<=C*envelope"});
  }
  r.conditions.push_back(
      {"log_ratio_slope", log_log_slope(tail_ts, tail_ratios), -std::numeric_limits<double>::infinity(), 0.1});
  return r;
}

double cf_decay_slope(const CfCurve& curve, double t_lo, double t_hi) {
  std::vector<double> ts, mods;
  for (const auto& pt : curve.points) {
    if (pt.t >= t_lo && pt.t <= t_hi && pt.modulus > curve.noise_floor()) {
      ts.push_back(pt.t);
      mods.push_back(pt.modulus);
    }
  }
  if (ts.size() < 2) fail(Errc::InsufficientDecay, "fewer than two moduli clear the noise floor in the fit range");
  return log_log_slope(ts, mods);
}

AlphaComparison alpha_comparison(const EnvelopeParams& p, unsigned n) {
  p.validate();
  require(n >= 1, Errc::InvalidArgument, "dimension must be positive");
  const double d = p.d, m = p.m;
  return {d - m, 0.5 * (3.0 * n - d / m) - 1.0};
}

}  // namespace polydens
