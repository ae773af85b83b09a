#include "polydens/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "polydens/error.hpp"
#include "polydens/moments.hpp"
#include "polydens/parallel.hpp"
#include "polydens/simd/kernels.hpp"

namespace polydens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace

bool ModulusCurve::is_valid(double tol) const {
  if (eps.size() != values.size()) return false;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!std::isfinite(values[k]) || values[k] < -tol || values[k] > 2.0 + tol) return false;
    if (k > 0 && (!(eps[k] > eps[k - 1]) || values[k] < values[k - 1] - tol)) return false;
  }
  return true;
}

bool ModulusCurve::is_concave(double tol) const {
  for (std::size_t k = 2; k < eps.size(); ++k) {
    const double s1 = (values[k - 1] - values[k - 2]) / (eps[k - 1] - eps[k - 2]);
    const double s2 = (values[k] - values[k - 1]) / (eps[k] - eps[k - 1]);
    if (s2 > s1 + tol * (1.0 + std::fabs(s1))) return false;
  }
  return true;
}

double shift_l1(const GriddedDensity& rho, std::size_t k) {
  const auto v = rho.values();
  const std::size_t g = v.size();
  if (k == 0) return 0.0;
  if (k >= g) return 2.0 * rho.mass();
  const double overlap = simd::kernels().l1_distance(v.subspan(k), v.first(g - k));
  const double edges = std::accumulate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), 0.0) +
                       std::accumulate(v.end() - static_cast<std::ptrdiff_t>(k), v.end(), 0.0);
  return rho.step() * (overlap + edges);
}

ErrorBudget exact_budget(const GriddedDensity& rho) {
  return {rho.clipped_mass(), shift_l1(rho, 1), 0.0};
}

DensityEstimate estimate_density(std::span<const double> values, const GridSpec& grid) {
  require(values.size() >= 2, Errc::InvalidArgument, "need at least two samples");
  DensityEstimate out{histogram_on_grid(values, grid), {}};
  const std::size_t half = values.size() / 2;
  const auto a = histogram_on_grid(values.first(half), grid);
  const auto b = histogram_on_grid(values.subspan(half), grid);
  out.budget = {out.density.clipped_mass(), shift_l1(out.density, 1),
                0.5 * grid.step * simd::kernels().l1_distance(a.values(), b.values())};
  return out;
}

DensityEstimate estimate_density(std::span<const double> values, std::size_t bins, const RangePolicy& policy) {
  require(values.size() >= 10 * bins, Errc::InvalidArgument, "histogram needs at least 10 samples per bin");
  return estimate_density(values, choose_grid(values, bins, policy));
}

DensityEstimate estimate_density(const StreamedHistogram& h) {
  DensityEstimate out{h.density, {}};
  out.budget = {h.density.clipped_mass(), shift_l1(h.density, 1),
                0.5 * h.density.step() * simd::kernels().l1_distance(h.first_half.values(), h.second_half.values())};
  return out;
}

ModulusCurve omega_curve(const GriddedDensity& rho, std::span<const double> eps) {
  ModulusCurve c;
  c.eps.assign(eps.begin(), eps.end());
  c.values.reserve(eps.size());
  // Cache S_k across probes; they share all small shifts.
  std::vector<double> s{0.0};
  auto shift = [&](std::size_t k) {
    while (s.size() <= k) s.push_back(shift_l1(rho, s.size()));
    return s[k];
  };
  for (double e : eps) {
    if (e < 2.0 * rho.step() * (1.0 - 1e-12)) {
      fail(Errc::EpsilonBelowResolution, "eps = " + fixed(e, 6) + " is below twice the grid step " +
                                             fixed(rho.step(), 6));
    }
    const double units = e / rho.step();
    const double whole = std::floor(units + 1e-9);
    const double frac = std::max(0.0, units - whole);
    const auto k_max = static_cast<std::size_t>(std::min(whole, static_cast<double>(rho.size())));
    double best = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) best = std::max(best, shift(k));
    if (frac > 0.0 && k_max < rho.size()) {
      best = std::max(best, (1.0 - frac) * shift(k_max) + frac * shift(k_max + 1));
    }
    c.values.push_back(best);
  }
  return c;
}

double omega(const GriddedDensity& rho, double eps) {
  require(std::isfinite(eps), Errc::InvalidArgument, "eps must be finite");
  const double probe[1] = {eps};
  return omega_curve(rho, probe).values.front();
}

SigmaValue sigma_lp(const GriddedDensity& rho, double eps, LpMethod method) {
  require(!std::isnan(eps), Errc::InvalidArgument, "eps must be a number");
  if (eps <= 0.0) return {};
  const auto v = rho.values();
  const std::size_t g = v.size();
  // Node j is the edge lo + j*step; its weight collects +v_{j-1} and -v_j.
  std::vector<double> c(g + 1, 0.0);
  for (std::size_t j = 0; j <= g; ++j) c[j] = (j > 0 ? v[j - 1] : 0.0) - (j < g ? v[j] : 0.0);
  const double bound = std::min(eps, 1e300);
  const auto res = solve_chain_lp(c, bound, rho.step(), method);
  // Outside the grid |phi'| <= 1 can gain at most the clipped mass.
  return {std::max(0.0, res.value), rho.clipped_mass()};
}

ModulusCurve sigma_curve(const GriddedDensity& rho, std::span<const double> eps, unsigned workers) {
  ModulusCurve c;
  c.eps.assign(eps.begin(), eps.end());
  c.values.assign(eps.size(), 0.0);
  parallel_for(eps.size(), workers, [&](std::size_t k) { c.values[k] = sigma_lp(rho, eps[k]).value; });
  return c;
}

std::vector<double> geometric_grid(double lo, double hi, unsigned per_decade) {
  require(lo > 0.0 && hi >= lo && std::isfinite(hi), Errc::InvalidArgument, "geometric grid needs 0 < lo <= hi");
  require(per_decade >= 1, Errc::InvalidArgument, "need at least one point per decade");
  const double decades = std::log10(hi / lo);
  const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil(decades * per_decade - 1e-9)));
  if (hi == lo) return {lo};
  std::vector<double> out(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    out[k] = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(intervals));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> default_probe_grid(double step) {
  const double lo = std::max(2.0 * step, 1e-3);
  if (lo >= 1.0) return {lo};
  return geometric_grid(lo, 1.0, 12);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), Errc::InvalidArgument, "slope needs paired values");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) continue;
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  require(n >= 2, Errc::InvalidArgument, "slope needs two positive points");
  const double dn = static_cast<double>(n);
  const double den = sxx - sx * sx / dn;
  require(den > 0.0, Errc::InvalidArgument, "slope needs distinct abscissae");
  return (sxy - sx * sy / dn) / den;
}

double BoundReport::margin() const {
  double m = kInf;
  for (const auto& p : probes) m = std::min(m, p.rhs - p.lhs);
  return m;
}

double BoundReport::slack() const {
  double m = kInf;
  for (const auto& p : probes) m = std::min(m, p.rhs - p.lhs + p.budget);
  return m;
}

bool BoundReport::pass() const {
  for (const auto& p : probes) {
    if (!p.pass()) return false;
  }
  for (const auto& c : conditions) {
    if (!c.pass()) return false;
  }
  return true;
}

nlohmann::json BoundReport::to_json() const {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  j["id"] = id;
  json probes_j = json::array();
  for (const auto& p : probes) {
    probes_j.push_back({{"eps", p.eps}, {"lhs", p.lhs}, {"rhs", p.rhs}, {"budget", p.budget},
                        {"relation", p.relation}, {"pass", p.pass()}});
  }
  j["probes"] = std::move(probes_j);
  json cond_j = json::array();
  for (const auto& c : conditions) {
    cond_j.push_back({{"name", c.name}, {"value", num(c.value)}, {"lo", num(c.lo)}, {"hi", num(c.hi)},
                      {"pass", c.pass()}});
  }
  j["conditions"] = std::move(cond_j);
  j["fitted_constant"] = fitted_constant ? num(*fitted_constant) : json(nullptr);
  j["budget"] = {{"tail", budget.tail}, {"bin", budget.bin}, {"noise", budget.noise}, {"total", budget.total()}};
  j["margin"] = num(margin());
  j["notes"] = notes;
  j["verdict"] = pass() ? "pass" : "fail";
  return j;
}

BoundReport sandwich_check(const GriddedDensity& rho, std::span<const double> eps, const ErrorBudget& budget) {
  BoundReport r;
  r.id = "sandwich";
  r.budget = budget;
  for (double e : eps) {
    const auto s = sigma_lp(rho, e);
    const double tol = budget.total() + s.tail_correction;
    r.probes.push_back({e, 0.5 * omega(rho, 2.0 * e), s.value, tol, "half_omega_2eps<=sigma"});
    r.probes.push_back({e, s.value, 6.0 * omega(rho, e), tol, "sigma<=6omega"});
  }
  return r;
}

BoundReport small_set_check(const EmpiricalCdf& cdf, const GriddedDensity& rho, std::span<const Interval> intervals,
                            const ErrorBudget& budget) {
  BoundReport r;
  r.id = "small_set";
  r.budget = budget;
  const double n = static_cast<double>(cdf.count());
  for (const auto& iv : intervals) {
    const double length = std::max(0.0, iv.b - iv.a);
    const double p = cdf.probability(iv.a, iv.b);
    const auto s = sigma_lp(rho, length);
    const double band = 4.0 * std::sqrt(p * (1.0 - p) / n) + 1.0 / n;
    r.probes.push_back({length, p, s.value, budget.total() + s.tail_correction + band, "P(A)<=sigma(|A|)"});
  }
  return r;
}

double envelope_log_term(double u, double k) { return k == 0.0 ? 0.0 : std::pow(std::fabs(std::log(u)), k); }

void EnvelopeParams::validate() const {
  require(m >= 1 && m <= d, Errc::InvalidArgument, "envelope needs 1 <= m <= d");
  require(std::isfinite(a) && a > 0.0, Errc::InvalidArgument, "envelope needs a > 0");
  if (exponent) require(std::isfinite(*exponent) && *exponent > 0.0, Errc::InvalidArgument, "exponent must be positive");
}

double envelope_rhs(const EnvelopeParams& p, double eps) {
  p.validate();
  require(eps > 0.0 && std::isfinite(eps), Errc::InvalidArgument, "eps must be positive");
  const double u = eps / p.a;
  return std::pow(u, p.power()) * (envelope_log_term(u, static_cast<double>(p.d - p.m)) + 1.0);
}

EnvelopeFit fit_envelope_constant(const ModulusCurve& curve, const EnvelopeParams& p) {
  require(curve.size() >= 1 && curve.eps.size() == curve.values.size(), Errc::InvalidArgument,
          "envelope fit needs a nonempty curve");
  EnvelopeFit fit;
  fit.ratios.reserve(curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) {
    fit.ratios.push_back(curve.values[k] / envelope_rhs(p, curve.eps[k]));
    fit.constant = std::max(fit.constant, fit.ratios.back());
  }
  if (curve.size() >= 2) {
    fit.value_slope = log_log_slope(curve.eps, curve.values);
    fit.ratio_slope = log_log_slope(curve.eps, fit.ratios);
  }
  return fit;
}

ModulusCurve resolved_window(const ModulusCurve& curve, double noise, double cap, double snr, std::size_t min_points) {
  auto select = [&](double ratio) {
    ModulusCurve w;
    for (std::size_t k = 0; k < curve.size(); ++k) {
      const double v = curve.values[k];
      if (v > 0.0 && v >= ratio * noise && v <= cap) {
        w.eps.push_back(curve.eps[k]);
        w.values.push_back(v);
      }
    }
    return w;
  };
  auto w = select(snr);
  if (w.size() < min_points) w = select(std::min(snr, 3.0));
  if (w.size() < min_points) {
    fail(Errc::EpsilonBelowResolution, "only " + std::to_string(w.size()) +
                                           " probes sit above the noise floor; raise N or widen the probes");
  }
  return w;
}

BoundReport envelope_check(const ModulusCurve& omega_values, const EnvelopeParams& p, double noise) {
  p.validate();
  const auto window = resolved_window(omega_values, noise, 1.0);
  const auto fit = fit_envelope_constant(window, p);
  BoundReport r;
  r.id = "envelope";
  r.fitted_constant = fit.constant;
  r.budget.noise = noise;
  for (std::size_t k = 0; k < window.size(); ++k) {
    const double rhs = fit.constant * envelope_rhs(p, window.eps[k]);
    // The maximizing probe sits on the bound up to rounding.
    r.probes.push_back({window.eps[k], window.values[k], rhs, noise + 1e-12 * rhs, "omega<=C*envelope"});
  }
  r.conditions.push_back({"log_ratio_slope", fit.ratio_slope, -0.15, kInf});
  r.notes.push_back("omega log-log slope " + fixed(fit.value_slope, 4) + " over eps in [" + fixed(window.eps.front(), 4) +
                    ", " + fixed(window.eps.back(), 4) + "]");
  return r;
}

BoundReport degree_fallback_check(const Polynomial& f, const ModulusCurve& sigma, double noise) {
  const double var = variance(f);
  if (!(var > 0.0)) fail(Errc::ZeroVariance, "f(X) is constant; the bound needs positive variance");
  const unsigned d = degree(f);
  const double inv_d = 1.0 / static_cast<double>(d);
  const auto window = resolved_window(sigma, noise, 0.5);
  const double scale = std::pow(var, -0.5 * inv_d);
  BoundReport r;
  r.id = "degree_fallback";
  double c = 0.0;
  for (std::size_t k = 0; k < window.size(); ++k) {
    c = std::max(c, window.values[k] / (scale * std::pow(window.eps[k], inv_d)));
  }
  r.fitted_constant = c;
  r.budget.noise = noise;
  for (std::size_t k = 0; k < window.size(); ++k) {
    const double rhs = c * scale * std::pow(window.eps[k], inv_d);
    r.probes.push_back({window.eps[k], window.values[k], rhs, noise + 1e-12 * rhs, "sigma<=C(d)Var^(-1/2d)eps^(1/d)"});
  }
  r.conditions.push_back({"sigma_log_log_slope", log_log_slope(window.eps, window.values), inv_d - 0.1, kInf});
  return r;
}

namespace {

bool same_step(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(a, b); }

GriddedDensity pad_to(const GriddedDensity& rho, double lo, std::size_t offset, std::size_t size) {
  std::vector<double> v(size, 0.0);
  std::copy(rho.values().begin(), rho.values().end(), v.begin() + static_cast<std::ptrdiff_t>(offset));
  GriddedDensity out(lo, rho.step(), std::move(v));
  out.set_clipped_mass(rho.clipped_mass());
  return out;
}

GriddedDensity rebin(const GriddedDensity& rho, double lo, double step, std::size_t size) {
  std::vector<double> v(size, 0.0);
  const auto src = rho.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] == 0.0) continue;
    const double a = rho.lo() + static_cast<double>(i) * rho.step();
    const double b = a + rho.step();
    const auto first = static_cast<std::ptrdiff_t>(std::floor((a - lo) / step));
    const auto last = static_cast<std::ptrdiff_t>(std::floor((b - lo) / step));
    for (std::ptrdiff_t t = std::max<std::ptrdiff_t>(first, 0);
         t <= last && t < static_cast<std::ptrdiff_t>(size); ++t) {
      const double ta = lo + static_cast<double>(t) * step;
      const double overlap = std::min(b, ta + step) - std::max(a, ta);
      if (overlap > 0.0) v[static_cast<std::size_t>(t)] += src[i] * overlap / step;
    }
  }
  GriddedDensity out(lo, step, std::move(v));
  out.set_clipped_mass(rho.clipped_mass());
  return out;
}

}  // namespace

std::pair<GriddedDensity, GriddedDensity> align_grids(const GriddedDensity& x, const GriddedDensity& y,
                                                      GridAlignment alignment) {
  if (same_step(x.step(), y.step())) {
    const double step = x.step();
    const double offset = (y.lo() - x.lo()) / step;
    const double rounded = std::round(offset);
    if (std::fabs(offset - rounded) <= 1e-6) {
      const auto shift = static_cast<std::ptrdiff_t>(rounded);
      const std::ptrdiff_t xs = 0, ys = shift;
      const std::ptrdiff_t first = std::min(xs, ys);
      const std::ptrdiff_t end = std::max(xs + static_cast<std::ptrdiff_t>(x.size()),
                                          ys + static_cast<std::ptrdiff_t>(y.size()));
      const double lo = x.lo() + static_cast<double>(first) * step;
      const auto size = static_cast<std::size_t>(end - first);
      return {pad_to(x, lo, static_cast<std::size_t>(xs - first), size),
              pad_to(y, lo, static_cast<std::size_t>(ys - first), size)};
    }
  }
  if (alignment == GridAlignment::Strict) fail(Errc::GridMismatch, "densities live on incompatible grids");
  const double step = std::min(x.step(), y.step());
  const double lo = std::min(x.lo(), y.lo());
  const double hi = std::max(x.hi(), y.hi());
  const auto size = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  auto ax = rebin(x, lo, step, size);
  auto ay = rebin(y, lo, step, size);
  if (std::fabs(ax.mass() - x.mass()) > 1e-9 || std::fabs(ay.mass() - y.mass()) > 1e-9) {
    fail(Errc::GridMismatch, "rebinning lost mass");
  }
  return {std::move(ax), std::move(ay)};
}

double tv_distance(const GriddedDensity& x, const GriddedDensity& y, GridAlignment alignment) {
  const auto [ax, ay] = align_grids(x, y, alignment);
  return ax.step() * simd::kernels().l1_distance(ax.values(), ay.values());
}

double kr_distance(const GriddedDensity& x, const GriddedDensity& y, GridAlignment alignment, LpMethod method) {
  const auto [ax, ay] = align_grids(x, y, alignment);
  const auto vx = ax.values(), vy = ay.values();
  const std::size_t g = vx.size();
  // Linear phi on a bin integrates to step * (phi_j + phi_{j+1}) / 2.
  std::vector<double> c(g + 1, 0.0);
  for (std::size_t i = 0; i < g; ++i) {
    const double w = 0.5 * ax.step() * (vx[i] - vy[i]);
    c[i] += w;
    c[i + 1] += w;
  }
  return std::max(0.0, solve_chain_lp(c, 1.0, ax.step(), method).value);
}

BoundReport tv_kr_inequality_check(const GriddedDensity& x, const GriddedDensity& y, std::span<const double> eps,
                                   const ErrorBudget& bx, const ErrorBudget& by) {
  BoundReport r;
  r.id = "tv_kr";
  r.budget = {bx.tail + by.tail, bx.bin + by.bin, bx.noise + by.noise};
  const double tv = tv_distance(x, y);
  const double kr = kr_distance(x, y);
  for (double e : eps) {
    require(e > 0.0 && e < 1.0, Errc::InvalidArgument, "the TV/KR inequality is checked for eps in (0, 1) only");
    const auto sx = sigma_lp(x, e), sy = sigma_lp(y, e);
    const double rhs = 6.0 * std::max(sx.value, sy.value) + kr / e;
    r.probes.push_back({e, tv, rhs, r.budget.total() + 6.0 * std::max(sx.tail_correction, sy.tail_correction),
                        "tv<=6max(sigma)+kr/eps"});
  }
  r.notes.push_back("tv " + fixed(tv, 8) + ", kr " + fixed(kr, 8));
  return r;
}

double corollary_epsilon(double dkr, unsigned m, unsigned d) {
  if (!(dkr > 0.0)) fail(Errc::NonpositiveDistance, "the corollary needs a positive KR distance");
  require(m >= 1 && m <= d, Errc::InvalidArgument, "need 1 <= m <= d");
  const double u = dkr / 3.0;
  const double md = static_cast<double>(m) / (m + 1.0);
  return std::pow(u, md) * std::pow(std::fabs(std::log(u)), (static_cast<double>(m) - d) * md);
}

double corollary_rate(double dkr, unsigned m, unsigned d) {
  if (!(dkr > 0.0)) fail(Errc::NonpositiveDistance, "the corollary needs a positive KR distance");
  require(m >= 1 && m <= d, Errc::InvalidArgument, "need 1 <= m <= d");
  const double md = static_cast<double>(m) / (m + 1.0);
  return std::pow(dkr, 1.0 / (m + 1.0)) * (envelope_log_term(dkr, (d - static_cast<double>(m)) * md) + 1.0);
}

double paired_tv_noise(std::span<const double> x, std::span<const double> y, const GridSpec& grid) {
  require(x.size() == y.size() && x.size() >= 2, Errc::InvalidArgument,
          "paired samples must have equal sizes of at least two");
  const std::size_t half = x.size() / 2;
  const auto xa = histogram_on_grid(x.first(half), grid), xb = histogram_on_grid(x.subspan(half), grid);
  const auto ya = histogram_on_grid(y.first(half), grid), yb = histogram_on_grid(y.subspan(half), grid);
  std::vector<double> da(grid.size), db(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) {
    da[i] = xa.values()[i] - ya.values()[i];
    db[i] = xb.values()[i] - yb.values()[i];
  }
  return 0.5 * grid.step * simd::kernels().l1_distance(da, db);
}

BoundReport corollary_check(std::span<const PerturbationPoint> family, unsigned m, unsigned d) {
  BoundReport r;
  r.id = "corollary";
  std::vector<double> deltas, ratios, tvs, tv_noise;
  for (const auto& p : family) {
    const double tv = tv_distance(p.x, p.y);
    const double kr = kr_distance(p.x, p.y);
    const ErrorBudget b{p.bx.tail + p.by.tail, p.bx.bin + p.by.bin, p.bx.noise + p.by.noise};
    r.budget.tail = std::max(r.budget.tail, b.tail);
    r.budget.bin = std::max(r.budget.bin, b.bin);
    r.budget.noise = std::max(r.budget.noise, b.noise);
    if (!(kr > 0.0)) {
      r.notes.push_back("delta " + fixed(p.delta, 6) + ": kr is 0, no ratio");
      continue;
    }
    const double eps = corollary_epsilon(kr, m, d);
    if (eps < 1.0) {
      const auto sx = sigma_lp(p.x, eps), sy = sigma_lp(p.y, eps);
      r.probes.push_back({eps, tv, 6.0 * std::max(sx.value, sy.value) + kr / eps,
                          b.total() + 6.0 * std::max(sx.tail_correction, sy.tail_correction),
                          "tv<=6max(sigma)+kr/eps at eps*"});
    } else {
      r.notes.push_back("delta " + fixed(p.delta, 6) + ": eps* = " + fixed(eps, 6) + " is not below 1");
    }
    const double ratio = tv / corollary_rate(kr, m, d);
    r.notes.push_back("delta " + fixed(p.delta, 6) + ": tv " + fixed(tv, 8) + " (paired noise " +
                      fixed(p.tv_noise, 8) + "), kr " + fixed(kr, 8) + ", ratio " + fixed(ratio, 6));
    deltas.push_back(p.delta);
    ratios.push_back(ratio);
    tvs.push_back(tv);
    tv_noise.push_back(p.tv_noise);
    r.fitted_constant = std::max(r.fitted_constant.value_or(0.0), ratio);
  }
  if (deltas.size() < 2) return r;
  // A TV at the noise floor says nothing about how the ratio scales.
  auto resolved = [&](double snr) {
    std::pair<std::vector<double>, std::vector<double>> w;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      if (tvs[k] > 0.0 && tvs[k] >= snr * tv_noise[k]) {
        w.first.push_back(deltas[k]);
        w.second.push_back(ratios[k]);
      }
    }
    return w;
  };
  auto w = resolved(10.0);
  if (w.first.size() < 2) w = resolved(3.0);
  if (w.first.size() < 2) {
    fail(Errc::EpsilonBelowResolution,
         "only " + std::to_string(w.first.size()) +
             " perturbation members have TV above 3x the paired noise; the ratio trend needs two (raise N or delta)");
  }
  r.conditions.push_back({"log_ratio_slope_vs_delta", log_log_slope(w.first, w.second), -0.15, kInf});
  return r;
}

}  // namespace polydens
