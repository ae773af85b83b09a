#include "polydens/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "polydens/charfn.hpp"
#include "polydens/cli/svg.hpp"
#include "polydens/density.hpp"
#include "polydens/functionals.hpp"
#include "polydens/io.hpp"
#include "polydens/moments.hpp"
#include "polydens/report.hpp"
#include "polydens/rng.hpp"

namespace polydens::cli {

namespace fs = std::filesystem;
using nlohmann::json;

ExitCode exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::EpsilonBelowResolution:
    case Errc::InsufficientDecay:
      return ExitCode::ResolutionError;
    default:
      return ExitCode::InputError;
  }
}

OutputDir::OutputDir(fs::path root) : root_(std::move(root)) {}

void OutputDir::write(const std::string& name, const std::string& text) {
  write_text_file(root_ / name, text);
  // Rewriting a file replaces its entry.
  std::erase_if(files_, [&](const Entry& e) { return e.name == name; });
  files_.push_back({name, text.size(), fnv1a(text)});
}

void OutputDir::write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

void OutputDir::add_timing(std::string stage, double seconds) { timings_.emplace_back(std::move(stage), seconds); }

void OutputDir::write_manifest(const ExperimentConfig& config, std::string_view command) {
  json files = json::array();
  auto sorted = files_;
  std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) { return a.name < b.name; });
  for (const auto& e : sorted) files.push_back({{"path", e.name}, {"bytes", e.bytes}, {"fnv1a", hex64(e.digest)}});
  json timings = json::object();
  for (const auto& [stage, seconds] : timings_) timings[stage] = seconds;
  const json m{{"command", command},     {"config_hash", hex64(config.hash())}, {"version", kToolVersion},
               {"files", std::move(files)}, {"timings_seconds", std::move(timings)}};
  write_text_file(root_ / "manifest.json", m.dump(2) + "\n");
}

namespace {

class Stopwatch {
 public:
  Stopwatch(OutputDir& out, std::string stage) : out_(out), stage_(std::move(stage)) {}
  ~Stopwatch() { out_.add_timing(stage_, std::chrono::duration<double>(Clock::now() - start_).count()); }
  Stopwatch(const Stopwatch&) = delete;
  Stopwatch& operator=(const Stopwatch&) = delete;

 private:
  using Clock = std::chrono::steady_clock;
  OutputDir& out_;
  std::string stage_;
  Clock::time_point start_ = Clock::now();
};

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Polynomial product_x1x2() {
  Polynomial f(2);
  f.add_term({1, 1}, 1.0);
  return f;
}

Polynomial primary_polynomial(const ExperimentConfig& c) {
  if (c.polynomial) return *c.polynomial;
  if (c.family.given) return random_in_class(c.family.params, c.seed);
  return product_x1x2();
}

EnvelopeParams envelope_params(const Polynomial& f, const TestHooks& hooks) {
  EnvelopeParams p{max_var_power(f), degree(f), leading_magnitude(f).magnitude, hooks.envelope_exponent};
  p.validate();
  return p;
}

void require_nonconstant(const Polynomial& f) {
  if (!(variance(f) > 0.0)) fail(Errc::ZeroVariance, "f(X) is constant: " + to_string(f));
}

std::vector<double> eps_probes(const ExperimentConfig& c, double step) {
  return c.eps.is_default() ? default_probe_grid(step) : c.eps.resolve();
}

// Probes for the TV/KR inequality, which only speaks about eps in (0, 1).
std::vector<double> unit_interval_probes(const ExperimentConfig& c, double step) {
  auto eps = eps_probes(c, step);
  if (c.eps.is_default()) std::erase_if(eps, [](double e) { return e >= 1.0; });
  return eps;
}

std::string csv_pairs(const std::string& header, std::span<const double> x, std::span<const double> y) {
  std::string s = header + "\n";
  for (std::size_t k = 0; k < x.size(); ++k) s += format_double(x[k]) + "," + format_double(y[k]) + "\n";
  return s;
}

json report_summary(const BoundReport& r) {
  return {{"verdict", r.pass() ? "pass" : "fail"},
          {"margin", num(r.margin())},
          {"slack", num(r.slack())},
          {"fitted_constant", r.fitted_constant ? num(*r.fitted_constant) : json(nullptr)}};
}

void log_report(std::ostream& log, const BoundReport& r) {
  log << "  " << r.id << ": " << (r.pass() ? "pass" : "FAIL");
  if (r.fitted_constant) log << ", fitted constant " << format_double(*r.fitted_constant);
  if (!r.probes.empty()) log << ", worst slack " << format_double(r.slack());
  for (const auto& c : r.conditions) {
    log << ", " << c.name << " " << format_double(c.value) << (c.pass() ? "" : " (out of range)");
  }
  log << "\n";
}

struct Estimated {
  SampleSet samples;
  DensityEstimate est;
};

Estimated sample_and_estimate(const Polynomial& f, const ExperimentConfig& c, std::uint64_t seed) {
  Estimated e{sample(f, c.samples, seed, c.workers), {}};
  e.est = estimate_density(e.samples.values, c.grid);
  return e;
}

}  // namespace

ExitCode cmd_variance(const ExperimentConfig& c, OutputDir& out, std::ostream& log) {
  const Polynomial f = primary_polynomial(c);
  const double by_moments = variance(f);
  const double by_hermite = variance_via_hermite(f);
  double mc = 0.0, se = 0.0;
  {
    Stopwatch timer(out, "sample");
    const auto s = sample(f, c.samples, c.seed, c.workers);
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= static_cast<double>(s.count());
    double m2 = 0.0;
    for (double v : s.values) m2 += (v - mean) * (v - mean);
    mc = m2 / static_cast<double>(s.count());
    // Exact fourth central moment: the plug-in one undershoots on heavy tails.
    se = std::sqrt(std::max(central_moment(f, 4) - by_moments * by_moments, 0.0) / static_cast<double>(s.count()));
  }
  const bool exact_agree = std::fabs(by_moments - by_hermite) <= 1e-9 * (1.0 + std::fabs(by_moments));
  const bool mc_agree = std::fabs(mc - by_moments) <= 4.0 * se + 1e-12 * (1.0 + by_moments);
  const bool pass = exact_agree && mc_agree;
  json summary{{"command", "variance"},
               {"polynomial", to_string(f)},
               {"variance_moments", by_moments},
               {"variance_hermite", by_hermite},
               {"variance_monte_carlo", mc},
               {"monte_carlo_std_error", se},
               {"samples", c.samples},
               {"seed", c.seed},
               {"exact_methods_agree", exact_agree},
               {"monte_carlo_within_4se", mc_agree},
               {"verdict", pass ? "pass" : "fail"}};
  log << "f = " << to_string(f) << "\n"
      << "  variance (moments) " << format_double(by_moments) << "\n"
      << "  variance (Hermite) " << format_double(by_hermite) << "\n"
      << "  variance (Monte Carlo, N=" << c.samples << ") " << format_double(mc) << " +- " << format_double(se)
      << "\n";
  if (by_moments == 0.0) {
    summary["warning"] = "f(X) is constant; its law has no density";
    log << "  warning: f(X) is constant; its law has no density\n";
  }
  log << "  verdict: " << (pass ? "pass" : "FAIL") << "\n";
  out.write_json("summary.json", summary);
  return pass ? ExitCode::Ok : ExitCode::VerdictFailure;
}

ExitCode cmd_modulus(const ExperimentConfig& c, OutputDir& out, std::ostream& log) {
  const Polynomial f = primary_polynomial(c);
  require_nonconstant(f);
  const auto params = envelope_params(f, c.hooks);
  Estimated e = [&] {
    Stopwatch timer(out, "sample_and_density");
    return sample_and_estimate(f, c, c.seed);
  }();
  const auto& rho = e.est.density;
  const auto eps = eps_probes(c, rho.step());
  Stopwatch timer(out, "functionals");
  const auto w = omega_curve(rho, eps);
  const auto s = sigma_curve(rho, eps, c.workers);
  const auto sandwich = sandwich_check(rho, eps, e.est.budget);
  const auto envelope = envelope_check(w, params, e.est.budget.noise);
  const auto fallback = degree_fallback_check(f, s, e.est.budget.noise);
  const auto fit = fit_envelope_constant(w, params);

  out.write("density.csv", density_csv(rho));
  out.write("omega.csv", curve_csv(w));
  out.write("sigma.csv", curve_csv(s));
  out.write("envelope_ratio.csv", ratio_csv(w.eps, fit.ratios));
  const json reports{{"sandwich", sandwich.to_json()}, {"envelope", envelope.to_json()},
                     {"degree_fallback", fallback.to_json()}};
  out.write_json("report.json", reports);
  if (c.svg) {
    out.write("modulus.svg", line_chart_svg({"moduli of " + to_string(f), "eps", "value"},
                                            {{"omega", w.eps, w.values}, {"sigma", s.eps, s.values}}));
    out.write("envelope_ratio.svg",
              line_chart_svg({"omega / envelope", "eps", "ratio", true, false}, {{"ratio", w.eps, fit.ratios}}));
  }
  const bool pass = sandwich.pass() && envelope.pass() && fallback.pass();
  json summary{{"command", "modulus"},
               {"polynomial", to_string(f)},
               {"envelope", {{"m", params.m}, {"d", params.d}, {"a", params.a}, {"exponent", params.power()}}},
               {"samples", c.samples},
               {"grid", c.grid},
               {"seed", c.seed},
               {"step", rho.step()},
               {"budget", {{"tail", e.est.budget.tail}, {"bin", e.est.budget.bin}, {"noise", e.est.budget.noise}}},
               {"omega_log_log_slope", fit.value_slope},
               {"checks",
                {{"sandwich", report_summary(sandwich)},
                 {"envelope", report_summary(envelope)},
                 {"degree_fallback", report_summary(fallback)}}},
               {"verdict", pass ? "pass" : "fail"}};
  out.write_json("summary.json", summary);
  log << "f = " << to_string(f) << " (m=" << params.m << ", d=" << params.d << ", a=" << format_double(params.a)
      << ")\n";
  log_report(log, sandwich);
  log_report(log, envelope);
  log_report(log, fallback);
  log << "  verdict: " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? ExitCode::Ok : ExitCode::VerdictFailure;
}

ExitCode cmd_cf(const ExperimentConfig& c, OutputDir& out, std::ostream& log) {
  const Polynomial f = primary_polynomial(c);
  require_nonconstant(f);
  const auto params = envelope_params(f, c.hooks);
  const auto ts = c.t.resolve();
  CfCurve curve;
  {
    Stopwatch timer(out, "sample_and_ecf");
    curve = ecf_modulus(sample(f, c.samples, c.seed, c.workers), ts, c.workers);
  }
  out.write("cf.csv", cf_csv(curve));
  const auto report = cf_envelope_check(curve, params);
  std::vector<double> rt, ratios;
  for (const auto& p : curve.points) {
    if (p.modulus <= curve.noise_floor()) continue;
    rt.push_back(p.t);
    ratios.push_back(p.modulus / cf_envelope(params, p.t));
  }
  out.write("cf_ratio.csv", csv_pairs("t,ratio", rt, ratios));
  const auto alpha = alpha_comparison(params, static_cast<unsigned>(f.dimension()));
  out.write_json("report.json", report.to_json());
  if (c.svg) {
    std::vector<double> mods;
    for (const auto& p : curve.points) mods.push_back(p.modulus);
    out.write("cf.svg", line_chart_svg({"|phi(t)| for " + to_string(f), "t", "modulus"}, {{"modulus", ts, mods}}));
  }
  json summary{{"command", "cf"},
               {"polynomial", to_string(f)},
               {"envelope", {{"m", params.m}, {"d", params.d}, {"a", params.a}, {"exponent", params.power()}}},
               {"samples", c.samples},
               {"seed", c.seed},
               {"noise_floor", curve.noise_floor()},
               {"alpha", {{"n", f.dimension()}, {"from_envelope", alpha.from_envelope}, {"prior", alpha.prior}}},
               {"checks", {{"cf_envelope", report_summary(report)}}},
               {"verdict", report.pass() ? "pass" : "fail"}};
  out.write_json("summary.json", summary);
  log << "f = " << to_string(f) << "\n";
  log_report(log, report);
  log << "  exponent comparison (m=" << params.m << ", d=" << params.d << ", n=" << f.dimension()
      << "): from the envelope " << format_double(alpha.from_envelope) << ", prior bound "
      << format_double(alpha.prior) << "\n";
  log << "  verdict: " << (report.pass() ? "pass" : "FAIL") << "\n";
  return report.pass() ? ExitCode::Ok : ExitCode::VerdictFailure;
}

namespace {

struct PairRun {
  double delta = 0.0;
  DensityEstimate x;
  DensityEstimate y;
  double tv_noise = 0.0;
};

// f and g sampled with the same seed (common random numbers) and binned on
// one grid chosen from both samples.
PairRun estimate_pair(const Polynomial& f, const Polynomial& g, double delta, const ExperimentConfig& c) {
  const auto sf = sample(f, c.samples, c.seed, c.workers);
  const auto sg = sample(g, c.samples, c.seed, c.workers);
  std::vector<double> both;
  both.reserve(sf.count() + sg.count());
  both.insert(both.end(), sf.values.begin(), sf.values.end());
  both.insert(both.end(), sg.values.begin(), sg.values.end());
  const auto grid = choose_grid(both, c.grid);
  return {delta, estimate_density(sf.values, grid), estimate_density(sg.values, grid),
          paired_tv_noise(sf.values, sg.values, grid)};
}

struct DistanceOutcome {
  std::vector<BoundReport> tv_kr;
  std::optional<BoundReport> corollary;
  std::optional<Error> corollary_error;
  std::vector<double> deltas, tv, kr, tv_noise, eps_star, ratio;

  bool pass() const {
    return corollary && corollary->pass() &&
           std::all_of(tv_kr.begin(), tv_kr.end(), [](const auto& r) { return r.pass(); });
  }
};

DistanceOutcome run_distances(const std::vector<std::pair<double, Polynomial>>& family, const Polynomial& f,
                              const ExperimentConfig& c) {
  unsigned m = max_var_power(f), d = degree(f);
  for (const auto& [_, g] : family) {
    m = std::max(m, max_var_power(g));
    d = std::max(d, degree(g));
  }
  DistanceOutcome o;
  std::vector<PerturbationPoint> points;
  for (const auto& [delta, g] : family) {
    const auto run = estimate_pair(f, g, delta, c);
    const auto probes = unit_interval_probes(c, run.x.density.step());
    o.tv_kr.push_back(tv_kr_inequality_check(run.x.density, run.y.density, probes, run.x.budget, run.y.budget));
    const double tv = tv_distance(run.x.density, run.y.density);
    const double kr = kr_distance(run.x.density, run.y.density);
    o.deltas.push_back(delta);
    o.tv.push_back(tv);
    o.kr.push_back(kr);
    o.tv_noise.push_back(run.tv_noise);
    o.eps_star.push_back(kr > 0.0 ? corollary_epsilon(kr, m, d) : 0.0);
    o.ratio.push_back(kr > 0.0 ? tv / corollary_rate(kr, m, d) : 0.0);
    if (kr > 0.0) points.push_back({delta, run.x.density, run.y.density, run.x.budget, run.y.budget, run.tv_noise});
  }
  try {
    o.corollary = corollary_check(points, m, d);
  } catch (const Error& e) {
    o.corollary_error = e;
  }
  return o;
}

// f + delta * direction for each delta.
std::vector<std::pair<double, Polynomial>> perturbation_family(const Polynomial& f, const Polynomial& direction,
                                                               std::span<const double> deltas) {
  std::vector<std::pair<double, Polynomial>> family;
  for (double delta : deltas) family.emplace_back(delta, f + scale(direction, delta));
  return family;
}

}  // namespace

ExitCode cmd_distance(const ExperimentConfig& c, OutputDir& out, std::ostream& log) {
  const Polynomial f = primary_polynomial(c);
  require_nonconstant(f);
  std::vector<std::pair<double, Polynomial>> family;
  if (c.polynomial2) {
    require_nonconstant(*c.polynomial2);
    require(c.polynomial2->dimension() == f.dimension(), Errc::DimensionMismatch,
            "both polynomials must have the same number of variables");
    family.emplace_back(0.0, *c.polynomial2);
  } else {
    family = perturbation_family(f, Polynomial::variable(f.dimension(), 0), c.deltas);
  }
  DistanceOutcome o;
  {
    Stopwatch timer(out, "distances");
    o = run_distances(family, f, c);
  }
  std::string table = "delta,tv,kr,tv_noise,eps_star,corollary_ratio\n";
  for (std::size_t k = 0; k < o.deltas.size(); ++k) {
    table += format_double(o.deltas[k]) + "," + format_double(o.tv[k]) + "," + format_double(o.kr[k]) + "," +
             format_double(o.tv_noise[k]) + "," + format_double(o.eps_star[k]) + "," + format_double(o.ratio[k]) +
             "\n";
  }
  out.write("distances.csv", table);
  json tv_kr = json::array();
  for (const auto& r : o.tv_kr) tv_kr.push_back(r.to_json());
  out.write_json("report.json",
                 {{"tv_kr", tv_kr}, {"corollary", o.corollary ? o.corollary->to_json() : json(nullptr)}});
  if (c.svg && o.deltas.size() >= 2) {
    out.write("distances.svg",
              line_chart_svg({"distances along the perturbation", "delta", "distance"},
                             {{"tv", o.deltas, o.tv}, {"kr", o.deltas, o.kr}}));
  }
  const bool increasing = std::is_sorted(o.tv.begin(), o.tv.end()) && std::is_sorted(o.kr.begin(), o.kr.end());
  json pairs = json::array();
  for (std::size_t k = 0; k < o.deltas.size(); ++k) {
    pairs.push_back({{"delta", o.deltas[k]},
                     {"tv", o.tv[k]},
                     {"kr", o.kr[k]},
                     {"tv_noise", o.tv_noise[k]},
                     {"eps_star", o.eps_star[k]},
                     {"corollary_ratio", o.ratio[k]},
                     {"tv_kr", report_summary(o.tv_kr[k])}});
  }
  log << "f = " << to_string(f) << "\n";
  for (std::size_t k = 0; k < o.deltas.size(); ++k) {
    log << "  delta " << format_double(o.deltas[k]) << ": tv " << format_double(o.tv[k]) << " (paired noise "
        << format_double(o.tv_noise[k]) << "), kr " << format_double(o.kr[k]) << ", corollary ratio "
        << format_double(o.ratio[k]) << ", TV/KR inequality " << (o.tv_kr[k].pass() ? "pass" : "FAIL") << "\n";
  }
  // The tables above stay on disk; run_command records the error summary.
  if (o.corollary_error) throw *o.corollary_error;
  json summary{{"command", "distance"},
               {"polynomial", to_string(f)},
               {"samples", c.samples},
               {"grid", c.grid},
               {"seed", c.seed},
               {"pairs", pairs},
               {"distances_increase_with_delta", increasing},
               {"checks", {{"corollary", report_summary(*o.corollary)}}},
               {"verdict", o.pass() ? "pass" : "fail"}};
  if (c.polynomial2) summary["polynomial2"] = to_string(*c.polynomial2);
  out.write_json("summary.json", summary);
  log_report(log, *o.corollary);
  log << "  verdict: " << (o.pass() ? "pass" : "FAIL") << "\n";
  return o.pass() ? ExitCode::Ok : ExitCode::VerdictFailure;
}

namespace {

constexpr const char* kCheckFamilies[] = {"sandwich", "small_set", "envelope", "degree_fallback", "cf", "distance"};

struct CheckOutcome {
  enum class State { Pass, Fail, Error } state = State::Pass;
  json detail;
  double slack = std::numeric_limits<double>::infinity();
  std::optional<Errc> error;
};

template <class Fn>
CheckOutcome run_check(Fn&& fn) {
  CheckOutcome o;
  try {
    const BoundReport r = fn();
    o.state = r.pass() ? CheckOutcome::State::Pass : CheckOutcome::State::Fail;
    o.slack = r.slack();
    o.detail = r.to_json();
  } catch (const Error& e) {
    o.state = CheckOutcome::State::Error;
    o.error = e.code();
    o.detail = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
  }
  return o;
}

std::vector<Interval> small_set_intervals(std::vector<double> values, double step) {
  std::vector<Interval> out;
  for (double q : {0.25, 0.5, 0.75}) {
    const auto k = static_cast<std::size_t>(q * static_cast<double>(values.size() - 1));
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
    const double center = values[k];
    for (double bins : {2.0, 8.0, 32.0}) out.push_back({center - 0.5 * bins * step, center + 0.5 * bins * step});
  }
  return out;
}

}  // namespace

ExitCode cmd_verify_all(const ExperimentConfig& c, OutputDir& out, std::ostream& log) {
  c.family.params.validate();
  struct Tally {
    unsigned pass = 0, fail = 0, error = 0;
    double worst = std::numeric_limits<double>::infinity();
  };
  std::map<std::string, Tally> tally;
  for (const char* name : kCheckFamilies) tally[name];
  json cases = json::array();
  bool any_input_error = false;
  Stopwatch total(out, "verify_all");
  for (unsigned k = 0; k < c.family.count; ++k) {
    const std::uint64_t case_seed = mix_seed(c.seed, k);
    const Polynomial f = random_in_class(c.family.params, case_seed);
    const auto params = envelope_params(f, c.hooks);
    const auto e = sample_and_estimate(f, c, mix_seed(case_seed, 1));
    const auto& rho = e.est.density;
    const auto eps = default_probe_grid(rho.step());
    const auto probes = c.eps.is_default() ? eps : c.eps.resolve();

    std::map<std::string, CheckOutcome> outcomes;
    outcomes["sandwich"] = run_check([&] { return sandwich_check(rho, probes, e.est.budget); });
    outcomes["small_set"] = run_check([&] {
      const auto intervals = small_set_intervals(e.samples.values, rho.step());
      return small_set_check(EmpiricalCdf(e.samples), rho, intervals, e.est.budget);
    });
    outcomes["envelope"] =
        run_check([&] { return envelope_check(omega_curve(rho, probes), params, e.est.budget.noise); });
    outcomes["degree_fallback"] =
        run_check([&] { return degree_fallback_check(f, sigma_curve(rho, probes, c.workers), e.est.budget.noise); });
    outcomes["cf"] = run_check([&] { return cf_envelope_check(ecf_modulus(e.samples, c.t.resolve(), c.workers), params); });
    outcomes["distance"] = run_check([&] {
      ExperimentConfig pc = c;
      pc.seed = mix_seed(case_seed, 2);
      // Along x1 alone the law can be even in delta (f invariant under
      // x -> -x up to the sign of the x1 term), which leaves TV at O(delta^2)
      // and below the noise floor; the constant part moves it at first order.
      const Polynomial direction =
          Polynomial::variable(f.dimension(), 0) + Polynomial::constant(f.dimension(), 1.0);
      const auto o = run_distances(perturbation_family(f, scale(direction, std::sqrt(variance(f))), c.family.deltas),
                                   f, pc);
      if (o.corollary_error) throw *o.corollary_error;
      // One report: every TV/KR probe plus the corollary conditions.
      BoundReport r = *o.corollary;
      r.id = "distance";
      for (const auto& t : o.tv_kr) r.probes.insert(r.probes.end(), t.probes.begin(), t.probes.end());
      return r;
    });

    json case_json{{"index", k}, {"polynomial", to_string(f)}, {"seed", case_seed}};
    json case_detail = case_json;
    log << "case " << k << ": " << to_string(f) << "\n";
    for (const auto& [name, o] : outcomes) {
      auto& t = tally[name];
      const char* state = o.state == CheckOutcome::State::Pass ? "pass" : o.state == CheckOutcome::State::Fail ? "fail" : "error";
      if (o.state == CheckOutcome::State::Pass) ++t.pass;
      if (o.state == CheckOutcome::State::Fail) ++t.fail;
      if (o.state == CheckOutcome::State::Error) {
        ++t.error;
        if (exit_code_for(*o.error) == ExitCode::InputError) any_input_error = true;
      }
      t.worst = std::min(t.worst, o.slack);
      json entry{{"verdict", state}, {"slack", num(o.slack)}};
      if (o.error) entry["error"] = std::string(to_string(*o.error));
      case_json["checks"][name] = entry;
      case_detail["checks"][name] = o.detail;
      log << "  " << name << ": " << state;
      if (o.error) log << " (" << to_string(*o.error) << ")";
      log << "\n";
    }
    out.write_json("cases/case_" + std::to_string(k) + ".json", case_detail);
    cases.push_back(case_json);
  }

  json checks = json::object();
  std::vector<std::string> failing;
  bool any_fail = false, any_error = false;
  for (const auto& [name, t] : tally) {
    checks[name] = {{"pass", t.pass}, {"fail", t.fail}, {"error", t.error}, {"worst_slack", num(t.worst)}};
    if (t.fail > 0 || t.error > 0) failing.push_back(name);
    any_fail |= t.fail > 0;
    any_error |= t.error > 0;
  }
  const bool pass = !any_fail && !any_error;
  json summary{{"command", "verify-all"},
               {"family",
                {{"n", c.family.params.n}, {"m", c.family.params.m}, {"d", c.family.params.d}, {"count", c.family.count}}},
               {"samples", c.samples},
               {"grid", c.grid},
               {"seed", c.seed},
               {"checks", checks},
               {"cases", cases},
               {"failing_checks", failing},
               {"verdict", pass ? "pass" : "fail"}};
  if (c.hooks.envelope_exponent) summary["test_hooks"] = {{"envelope_exponent", *c.hooks.envelope_exponent}};
  out.write_json("summary.json", summary);
  log << "summary:";
  for (const auto& [name, t] : tally) log << " " << name << " " << t.pass << "/" << (t.pass + t.fail + t.error);
  log << "\n  verdict: " << (pass ? "pass" : "FAIL");
  if (!failing.empty()) {
    log << " (failing:";
    for (const auto& n : failing) log << " " << n;
    log << ")";
  }
  log << "\n";
  if (any_fail) return ExitCode::VerdictFailure;
  if (any_input_error) return ExitCode::InputError;
  if (any_error) return ExitCode::ResolutionError;
  return ExitCode::Ok;
}

ExitCode run_command(std::string_view name, const ExperimentConfig& config, std::ostream& log) {
  OutputDir out(config.out);
  out.write_json("config.json", config.to_json());
  ExitCode code = ExitCode::Ok;
  try {
    if (name == "variance") {
      code = cmd_variance(config, out, log);
    } else if (name == "modulus") {
      code = cmd_modulus(config, out, log);
    } else if (name == "cf") {
      code = cmd_cf(config, out, log);
    } else if (name == "distance") {
      code = cmd_distance(config, out, log);
    } else if (name == "verify-all") {
      code = cmd_verify_all(config, out, log);
    } else {
      fail(Errc::InvalidArgument, "unknown command '" + std::string(name) + "'");
    }
  } catch (const Error& e) {
    code = exit_code_for(e.code());
    out.write_json("summary.json", {{"command", name},
                                    {"verdict", "error"},
                                    {"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}});
    log << "error: " << e.what() << "\n";
  }
  out.write_manifest(config, name);
  return code;
}

}  // namespace polydens::cli
