#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles/chain_lp_vertices.hpp"
#include "oracles/closed_forms.hpp"
#include "polydens/functionals.hpp"
#include "polydens/moments.hpp"
#include "support/expect_error.hpp"

using namespace polydens;

namespace {

GriddedDensity normal_grid(double mean, double sd, double step, double lo = -9.0, double hi = 9.0) {
  const auto size = static_cast<std::size_t>(std::llround((hi - lo) / step));
  return oracle_density({OracleKind::Normal, mean, sd}, GridSpec{lo, step, size});
}

GriddedDensity uniform_grid(std::size_t bins) {
  return GriddedDensity(0.0, 1.0 / static_cast<double>(bins), std::vector<double>(bins, 1.0));
}

GriddedDensity random_density(std::mt19937_64& rng, std::size_t bins, double lo, double step) {
  std::exponential_distribution<double> law;
  std::vector<double> v(bins);
  double s = 0.0;
  for (auto& x : v) s += (x = law(rng) * (rng() % 4 == 0 ? 0.0 : 1.0));
  if (s == 0.0) v[0] = s = 1.0;
  for (auto& x : v) x /= s * step;
  return GriddedDensity(lo, step, std::move(v));
}

// L1 distance between a step function and its translate by h, integrated
// exactly over the merged breakpoints.
double shifted_l1(const GriddedDensity& rho, double h) {
  auto value = [&](double x) {
    const double pos = std::floor((x - rho.lo()) / rho.step());
    if (pos < 0 || pos >= static_cast<double>(rho.size())) return 0.0;
    return rho.values()[static_cast<std::size_t>(pos)];
  };
  std::vector<double> cuts;
  for (std::size_t i = 0; i <= rho.size(); ++i) {
    const double e = rho.lo() + static_cast<double>(i) * rho.step();
    cuts.push_back(e);
    cuts.push_back(e - h);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (b - a <= 1e-14) continue;
    const double mid = 0.5 * (a + b);
    total += std::fabs(value(mid + h) - value(mid)) * (b - a);
  }
  return total;
}

// Objective of the dual modulus with phi linear on each bin:
// sum_i v_i (phi_{i+1} - phi_i), collected per edge node.
std::vector<double> sigma_costs(const GriddedDensity& rho) {
  const auto v = rho.values();
  std::vector<double> c(v.size() + 1, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    c[i + 1] += v[i];
    c[i] -= v[i];
  }
  return c;
}

// Integral of phi (x - y) with phi linear on each bin, per edge node.
std::vector<double> kr_costs(const GriddedDensity& x, const GriddedDensity& y) {
  std::vector<double> c(x.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = (x.values()[i] - y.values()[i]) * x.step() / 2.0;
    c[i] += w;
    c[i + 1] += w;
  }
  return c;
}

ModulusCurve curve_of(std::vector<double> eps, std::vector<double> values) { return {std::move(eps), std::move(values)}; }

}  // namespace

TEST_CASE("omega of the standard normal") {
  const auto rho = normal_grid(0.0, 1.0, 0.005);
  const double expected = oracle::gaussian_shift_l1(0.1);
  CHECK(expected == doctest::Approx(0.0798).epsilon(1e-3));
  CHECK(std::fabs(omega(rho, 0.1) - expected) <= 0.003);
  CHECK(omega(rho, 50.0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("omega below the resolution limit") {
  const auto rho = normal_grid(0.0, 1.0, 0.01);
  expect_error(Errc::EpsilonBelowResolution, [&] { (void)omega(rho, 0.015); });
  CHECK_NOTHROW((void)omega(rho, 0.02));
}

TEST_CASE("omega matches the exact supremum over real shifts") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_density(rng, 12, -1.0, 0.25);
    for (double eps : {0.5, 0.6, 0.9, 1.37, 2.5}) {
      // Dense search over h in (0, eps] on a lattice that contains every
      // multiple of the step; the maximum is attained at one of those or at eps.
      double best = shifted_l1(rho, eps);
      for (int k = 1; k <= 400; ++k) best = std::max(best, shifted_l1(rho, eps * k / 400.0));
      for (int k = 1; k * 0.25 <= eps; ++k) best = std::max(best, shifted_l1(rho, k * 0.25));
      CHECK(omega(rho, eps) == doctest::Approx(best).epsilon(1e-10).scale(1.0));
      // Symmetric in the sign of the shift.
      CHECK(shifted_l1(rho, -eps) == doctest::Approx(shifted_l1(rho, eps)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sigma of the uniform density") {
  const auto rho = uniform_grid(200);
  const double tol = 2.0 * rho.step();
  CHECK(std::fabs(sigma_lp(rho, 0.2).value - 0.4) <= tol);
  CHECK(std::fabs(sigma_lp(rho, 10.0).value - 1.0) <= tol);
  CHECK(sigma_lp(rho, 0.0).value == 0.0);
  CHECK(sigma_lp(rho, 0.2, LpMethod::Simplex).value == doctest::Approx(sigma_lp(rho, 0.2).value));
}

TEST_CASE("sigma equals vertex enumeration on small grids") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    // Enumeration cost grows like 4^G, so only a few of the largest grids.
    const std::size_t bins = trial < 2 ? 12 : 1 + trial % 9;
    const auto rho = random_density(rng, bins, 0.0, 0.3);
    for (double eps : {0.05, 0.3, 1.0, 4.0}) {
      const auto c = sigma_costs(rho);
      const double expected = oracle::chain_lp_by_vertices(c, eps, rho.step());
      CHECK(std::fabs(sigma_lp(rho, eps).value - expected) <= 1e-9);
    }
  }
}

TEST_CASE("sigma never exceeds 2") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = random_density(rng, 80, 0.0, 0.05);
    CHECK(sigma_lp(rho, 1e6).value <= 2.0 + 1e-12);
  }
}

TEST_CASE("sigma reports the clipped mass as its tail correction") {
  auto rho = normal_grid(0.0, 1.0, 0.01, -2.0, 2.0);
  CHECK(sigma_lp(rho, 0.1).tail_correction == doctest::Approx(2.0 * (1.0 - oracle::normal_cdf(2.0))));
}

TEST_CASE("sandwich holds for the oracle laws") {
  const std::vector<double> probes{0.05, 0.1, 0.2, 0.5};
  SUBCASE("normal") {
    const auto rho = normal_grid(0.0, 1.0, 0.01);
    const auto r = sandwich_check(rho, probes, exact_budget(rho));
    CHECK(r.pass());
    CHECK(r.margin() >= 0.0);
  }
  SUBCASE("chi-square") {
    const auto rho = oracle_density({OracleKind::ChiSquare1}, GridSpec{-0.1, 0.01, 2500});
    const auto r = sandwich_check(rho, probes, exact_budget(rho));
    CHECK(r.pass());
  }
  SUBCASE("near-Dirac") {
    const auto rho = normal_grid(0.0, 0.002, 0.01, -1.0, 1.0);
    const auto budget = exact_budget(rho);
    const auto r = sandwich_check(rho, probes, budget);
    CHECK(r.pass());
    // Nearly all the mass sits in one or two bins, so the bin term is large.
    CHECK(budget.bin > 0.5);
  }
  SUBCASE("Monte Carlo histogram") {
    Polynomial f(2);
    f.add_term({1, 1}, 1.0);
    f.add_term({2, 0}, 0.5);
    const auto s = sample(f, 1'000'000, 8);
    const auto est = estimate_density(s.values, 400);
    const auto r = sandwich_check(est.density, default_probe_grid(est.density.step()), est.budget);
    CHECK(r.pass());
  }
}

TEST_CASE("small-set probabilities are dominated by sigma") {
  const auto s = sample(Polynomial::variable(1, 0), 1'000'000, 12);
  const auto est = estimate_density(s.values, 400);
  const EmpiricalCdf cdf(s);
  const double span = est.density.hi() - est.density.lo();
  const std::vector<Interval> intervals{{-0.05, 0.05}, {0.3, 0.5}, {1.0, 1.0}, {-span, span}};
  const auto r = small_set_check(cdf, est.density, intervals, est.budget);
  REQUIRE(r.probes.size() == 4);
  CHECK(r.probes[0].lhs == doctest::Approx(oracle::normal_cdf(0.05) - oracle::normal_cdf(-0.05)).epsilon(0.02));
  CHECK(r.probes[0].lhs == doctest::Approx(0.0399).epsilon(0.02));
  CHECK(r.probes[2].lhs == 0.0);
  CHECK(r.probes[2].rhs == 0.0);
  CHECK(r.probes[3].lhs == doctest::Approx(1.0));
  CHECK(r.pass());
}

TEST_CASE("envelope formula") {
  CHECK(envelope_rhs({1, 2, 1.0}, std::exp(-1.0)) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(envelope_rhs({1, 2, 1.0}, std::exp(-1.0)) == doctest::Approx(0.7358).epsilon(1e-4));
  for (double a : {0.3, 1.0, 7.0}) CHECK(envelope_rhs({3, 3, a}, a) == doctest::Approx(1.0));
  CHECK(envelope_rhs({2, 3, 2.0}, 2.0 * std::exp(-2.0)) == doctest::Approx(1.1036).epsilon(1e-4));
  expect_error(Errc::InvalidArgument, [] { (void)envelope_rhs({3, 2, 1.0}, 0.1); });
  expect_error(Errc::InvalidArgument, [] { (void)envelope_rhs({1, 2, 0.0}, 0.1); });
}

TEST_CASE("envelope fit on exact curves") {
  const EnvelopeParams p{2, 2, 1.5};
  const auto eps = geometric_grid(1e-3, 1.0, 12);
  std::vector<double> values;
  for (double e : eps) values.push_back(envelope_rhs(p, e));
  const auto fit = fit_envelope_constant(curve_of(eps, values), p);
  CHECK(fit.constant == doctest::Approx(1.0));
  CHECK(fit.value_slope == doctest::Approx(0.5));
  CHECK(fit.ratio_slope == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("envelope fit for the standard normal") {
  const auto rho = normal_grid(0.0, 1.0, 0.001, -7.0, 7.0);
  const auto eps = geometric_grid(0.01, 0.1, 12);
  const auto curve = omega_curve(rho, eps);
  const auto fit = fit_envelope_constant(curve, {1, 1, 1.0});
  // omega(eps) = 4 Phi(eps/2) - 2 <= sqrt(2/pi) eps, with equality as eps -> 0.
  CHECK(fit.constant == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(0.01));
  CHECK(fit.value_slope == doctest::Approx(1.0).epsilon(0.02));
  const auto r = envelope_check(curve, {1, 1, 1.0}, 0.0);
  CHECK(r.pass());
}

TEST_CASE("envelope for the product of two normals") {
  // The exact law has a log singularity at 0, so omega(eps) behaves like
  // eps |ln eps| and its slope over [0.01, 0.1] sits below 1.
  const GridSpec grid{-12.0, 0.002, 12000};
  const auto exact = oracle_density({OracleKind::ProductNormal}, grid);
  const auto eps = geometric_grid(0.01, 0.1, 12);
  const auto exact_fit = fit_envelope_constant(omega_curve(exact, eps), {1, 2, 1.0});
  MESSAGE("x1*x2 omega slope of the exact law over [0.01, 0.1]: " << exact_fit.value_slope);
  CHECK(exact_fit.value_slope > 0.7);
  CHECK(exact_fit.value_slope < 0.9);
  CHECK(exact_fit.ratio_slope >= -0.15);

  Polynomial f(2);
  f.add_term({1, 1}, 1.0);
  const auto h = sample_histogram(f, 4'000'000, 5, GridSpec{-6.0, 0.004, 3000});
  const auto est = estimate_density(h);
  const auto probes = geometric_grid(0.01, 1.0, 12);
  const auto mc_curve = omega_curve(est.density, probes);
  const auto r = envelope_check(mc_curve, {1, 2, 1.0}, est.budget.noise);
  CHECK(r.pass());
  // Over the window the noise leaves usable, the estimate follows the law.
  const auto window = resolved_window(mc_curve, est.budget.noise, 1.0);
  const double mc_slope = log_log_slope(window.eps, window.values);
  const auto exact_window = omega_curve(exact, window.eps);
  const double exact_slope = log_log_slope(exact_window.eps, exact_window.values);
  MESSAGE("window [" << window.eps.front() << ", " << window.eps.back() << "]: Monte Carlo slope " << mc_slope
                     << ", exact " << exact_slope);
  CHECK(std::fabs(mc_slope - exact_slope) <= 0.05);
}

TEST_CASE("resolved window") {
  const auto c = curve_of({0.01, 0.02, 0.04, 0.08, 0.16, 0.32, 0.64}, {0.001, 0.01, 0.05, 0.1, 0.2, 0.7, 1.2});
  const auto w = resolved_window(c, 0.004, 1.0);
  CHECK(w.eps == std::vector<double>{0.04, 0.08, 0.16, 0.32});
  // Too few points at snr 10: retries at 3.
  const auto w3 = resolved_window(c, 0.015, 1.0);
  CHECK(w3.eps == std::vector<double>{0.04, 0.08, 0.16, 0.32});
  expect_error(Errc::EpsilonBelowResolution, [&] { (void)resolved_window(c, 0.1, 1.0); });
}

TEST_CASE("degree fallback") {
  const auto probes = geometric_grid(0.02, 1.0, 12);
  SUBCASE("linear") {
    const auto rho = normal_grid(0.0, 1.0, 0.005);
    const auto r = degree_fallback_check(Polynomial::variable(1, 0), sigma_curve(rho, probes), 0.0);
    CHECK(r.pass());
    CHECK(r.conditions.at(0).value == doctest::Approx(1.0).epsilon(0.1));
  }
  SUBCASE("square") {
    Polynomial f(1);
    f.add_term({2}, 1.0);
    const auto rho = oracle_density({OracleKind::ChiSquare1}, GridSpec{-0.05, 0.005, 5000});
    const auto r = degree_fallback_check(f, sigma_curve(rho, probes), 0.0);
    CHECK(r.pass());
    CHECK(r.conditions.at(0).value >= 0.4);
  }
  SUBCASE("rescaling leaves the constant unchanged") {
    const auto f = Polynomial::variable(1, 0);
    const auto rho = normal_grid(0.0, 1.0, 0.005);
    const auto rho2 = normal_grid(0.0, 2.0, 0.005, -18.0, 18.0);
    const auto c1 = degree_fallback_check(f, sigma_curve(rho, probes), 0.0).fitted_constant.value();
    const auto c2 = degree_fallback_check(scale(f, 2.0), sigma_curve(rho2, probes), 0.0).fitted_constant.value();
    CHECK(c2 == doctest::Approx(c1).epsilon(0.05));
  }
  expect_error(Errc::ZeroVariance,
               [&] { (void)degree_fallback_check(Polynomial::constant(1, 2.0), curve_of({0.1}, {0.1}), 0.0); });
}

TEST_CASE("total variation distance") {
  const auto a = normal_grid(0.0, 1.0, 0.01);
  CHECK(tv_distance(a, a) == 0.0);
  const auto b = normal_grid(0.1, 1.0, 0.01, -8.0, 10.0);
  CHECK(std::fabs(tv_distance(a, b) - oracle::gaussian_shift_l1(0.1)) <= 0.005);
  const auto far = normal_grid(100.0, 1.0, 0.01, 90.0, 110.0);
  CHECK(tv_distance(a, far) == doctest::Approx(2.0).epsilon(1e-6));
  // Misaligned grids are rebinned by overlap.
  const auto c = normal_grid(0.1, 1.0, 0.007, -8.0033, 10.0);
  CHECK(std::fabs(tv_distance(a, c) - oracle::gaussian_shift_l1(0.1)) <= 0.005);
  expect_error(Errc::GridMismatch, [&] { (void)tv_distance(a, c, GridAlignment::Strict); });
}

TEST_CASE("grid alignment keeps mass") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_density(rng, 30, -1.0, 0.1);
    const auto y = random_density(rng, 17, -0.77, 0.13);
    const auto [ax, ay] = align_grids(x, y);
    CHECK(ax.step() == ay.step());
    CHECK(ax.lo() == ay.lo());
    CHECK(ax.mass() == doctest::Approx(x.mass()).epsilon(1e-12));
    CHECK(ay.mass() == doctest::Approx(y.mass()).epsilon(1e-12));
  }
}

TEST_CASE("Kantorovich-Rubinstein distance") {
  const auto a = normal_grid(0.0, 1.0, 0.01);
  CHECK(kr_distance(a, a) == 0.0);
  // For a small shift the optimal phi is x -> clamp(x, -1, 1) up to sign,
  // so KR is close to the shift times the mass... and never above TV.
  const auto b = normal_grid(0.1, 1.0, 0.01, -8.0, 10.0);
  CHECK(kr_distance(a, b) <= tv_distance(a, b));
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_density(rng, 40, 0.0, 0.1);
    const auto y = random_density(rng, 40, 0.0, 0.1);
    const double kr = kr_distance(x, y), tv = tv_distance(x, y);
    CHECK(kr <= tv + 1e-12);
    CHECK(kr <= 2.0);
    CHECK(kr == doctest::Approx(kr_distance(x, y, GridAlignment::Rebin, LpMethod::Simplex)).epsilon(1e-10));
  }
}

TEST_CASE("KR equals vertex enumeration on small grids") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t bins = trial < 2 ? 12 : 1 + trial % 9;
    const auto x = random_density(rng, bins, 0.0, 0.4);
    const auto y = random_density(rng, bins, 0.0, 0.4);
    CHECK(kr_distance(x, y) == doctest::Approx(oracle::chain_lp_by_vertices(kr_costs(x, y), 1.0, 0.4)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("property: metric axioms") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_density(rng, 50, 0.0, 0.05);
    const auto y = random_density(rng, 50, 0.2, 0.05);
    const auto z = random_density(rng, 40, -0.3, 0.05);
    for (auto dist : {+[](const GriddedDensity& p, const GriddedDensity& q) { return tv_distance(p, q); },
                      +[](const GriddedDensity& p, const GriddedDensity& q) { return kr_distance(p, q); }}) {
      CHECK(dist(x, y) == doctest::Approx(dist(y, x)).epsilon(1e-12));
      CHECK(dist(x, y) >= 0.0);
      CHECK(dist(x, x) == 0.0);
      CHECK(dist(x, z) <= dist(x, y) + dist(y, z) + 1e-12);
    }
  }
}

TEST_CASE("TV/KR inequality") {
  const std::vector<double> probes{0.02, 0.05, 0.1, 0.3, 0.9};
  const auto a = normal_grid(0.0, 1.0, 0.01);
  const auto same = tv_kr_inequality_check(a, a, probes, exact_budget(a), exact_budget(a));
  CHECK(same.pass());

  Polynomial f(2), g(2);
  f.add_term({1, 1}, 1.0);
  g.add_term({1, 1}, 1.0);
  g.add_term({1, 0}, 0.1);
  // Common random numbers keep the pair's noise correlated.
  const auto sf = sample(f, 1'000'000, 40);
  const auto sg = sample(g, 1'000'000, 40);
  const auto grid = choose_grid(sf.values, 400);
  const auto ef = estimate_density(sf.values, grid);
  const auto eg = estimate_density(sg.values, grid);
  CHECK(tv_kr_inequality_check(ef.density, eg.density, probes, ef.budget, eg.budget).pass());

  const auto far = normal_grid(30.0, 1.0, 0.01, 21.0, 39.0);
  const auto r = tv_kr_inequality_check(a, far, probes, exact_budget(a), exact_budget(far));
  CHECK(r.pass());
  const std::vector<double> outside{0.5, 1.0};
  expect_error(Errc::InvalidArgument, [&] { (void)tv_kr_inequality_check(a, a, outside, {}, {}); });
}

TEST_CASE("corollary epsilon") {
  CHECK(corollary_epsilon(0.3, 1, 2) == doctest::Approx(std::sqrt(0.1) / std::sqrt(std::log(10.0))));
  CHECK(corollary_epsilon(0.3, 1, 2) == doctest::Approx(0.2084).epsilon(1e-3));
  for (unsigned m : {1u, 2u, 3u}) CHECK(corollary_epsilon(0.06, m, m) == doctest::Approx(std::pow(0.02, m / (m + 1.0))));
  expect_error(Errc::NonpositiveDistance, [] { (void)corollary_epsilon(0.0, 1, 1); });
  expect_error(Errc::NonpositiveDistance, [] { (void)corollary_rate(-1.0, 1, 1); });
  CHECK(corollary_rate(0.04, 1, 1) == doctest::Approx(0.2));
  CHECK(corollary_rate(0.04, 1, 2) == doctest::Approx(0.2 * (std::sqrt(std::log(25.0)) + 1.0)));
}

TEST_CASE("corollary check on shifted normals") {
  std::vector<PerturbationPoint> family;
  const auto base = normal_grid(0.0, 1.0, 0.002, -8.0, 8.0);
  for (double delta : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    const auto moved = normal_grid(delta, 1.0, 0.002, -8.0, 8.0);
    family.push_back({delta, base, moved, exact_budget(base), exact_budget(moved)});
  }
  const auto r = corollary_check(family, 1, 1);
  CHECK(r.pass());
  CHECK(r.probes.size() == family.size());
  // TV ~ 0.8 delta and KR ~ delta, so the ratio to sqrt(KR) falls like sqrt(delta).
  CHECK(r.conditions.at(0).value == doctest::Approx(0.5).epsilon(0.1));

  // Members at the noise floor drop out of the trend fit.
  for (std::size_t k = 2; k < family.size(); ++k) family[k].tv_noise = 1.0;
  const auto partial = corollary_check(family, 1, 1);
  CHECK(partial.pass());
  CHECK(partial.probes.size() == family.size());
  for (auto& p : family) p.tv_noise = 1.0;
  expect_error(Errc::EpsilonBelowResolution, [&] { (void)corollary_check(family, 1, 1); });
}

TEST_CASE("paired TV noise under common random numbers") {
  Polynomial f(2), g(2);
  f.add_term({1, 1}, 1.0);
  g.add_term({1, 1}, 1.0);
  g.add_term({1, 0}, 0.1);
  const auto sx = sample(f, 200'000, 3), sy = sample(g, 200'000, 3);
  std::vector<double> both(sx.values);
  both.insert(both.end(), sy.values.begin(), sy.values.end());
  const auto grid = choose_grid(both, 200);
  const double paired = paired_tv_noise(sx.values, sy.values, grid);
  // Triangle inequality on the half-sample differences.
  const double independent =
      estimate_density(sx.values, grid).budget.noise + estimate_density(sy.values, grid).budget.noise;
  CHECK(paired > 0.0);
  CHECK(paired <= independent + 1e-12);
  CHECK(paired_tv_noise(sx.values, sx.values, grid) == 0.0);
  // Noise shrinks like N^(-1/2).
  const auto lx = sample(f, 3'200'000, 3), ly = sample(g, 3'200'000, 3);
  const double large = paired_tv_noise(lx.values, ly.values, grid);
  CHECK(large < 0.4 * paired);
  CHECK(large > 0.15 * paired);
  expect_error(Errc::InvalidArgument,
               [&] { (void)paired_tv_noise(sx.values, std::span<const double>(sy.values).first(10), grid); });
}

TEST_CASE("property: moduli are monotone and sigma is concave") {
  std::mt19937_64 rng(30);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = random_density(rng, 300, 0.0, 0.01);
    const auto eps = default_probe_grid(rho.step());
    const auto w = omega_curve(rho, eps);
    const auto s = sigma_curve(rho, eps);
    CHECK(w.is_valid());
    CHECK(s.is_valid());
    CHECK(s.is_concave());
  }
}

TEST_CASE("property: scaling identity for sigma") {
  for (double alpha : {2.0, 5.0}) {
    // Exactly rescaled grids.
    const auto rho = normal_grid(0.0, 1.0, 0.01);
    const auto rho_a = normal_grid(0.0, alpha, 0.01 * alpha, -9.0 * alpha, 9.0 * alpha);
    // A common grid for both.
    const auto rho_c = normal_grid(0.0, alpha, 0.01, -9.0 * alpha, 9.0 * alpha);
    const auto budget = exact_budget(rho_c).total() + exact_budget(rho).total();
    for (double t : {0.1, 0.4, 1.0, 3.0}) {
      const double ref = sigma_lp(rho, t / alpha).value;
      CHECK(sigma_lp(rho_a, t).value == doctest::Approx(ref).epsilon(1e-9));
      CHECK(std::fabs(sigma_lp(rho_c, t).value - ref) <= budget);
    }
  }
}

TEST_CASE("curve and grid helpers") {
  const auto g = geometric_grid(1e-3, 1.0, 12);
  CHECK(g.size() == 37);
  CHECK(g.front() == doctest::Approx(1e-3));
  CHECK(g.back() == doctest::Approx(1.0));
  CHECK(default_probe_grid(0.01).front() == doctest::Approx(0.02));
  CHECK(default_probe_grid(1e-5).front() == doctest::Approx(1e-3));
  const std::vector<double> x{1, 2, 4, 8}, y{3, 3 * std::sqrt(2.0), 6, 6 * std::sqrt(2.0)};
  CHECK(log_log_slope(x, y) == doctest::Approx(0.5));
  CHECK(curve_of({0.1, 0.2}, {0.5, 0.4}).is_valid() == false);
  CHECK(curve_of({0.1, 0.2}, {0.5, 2.5}).is_valid() == false);
  CHECK(curve_of({0.2, 0.1}, {0.1, 0.2}).is_valid() == false);
}

TEST_CASE("bound report serialization") {
  const auto rho = normal_grid(0.0, 1.0, 0.01);
  const std::vector<double> probes{0.05, 0.1};
  const auto j = sandwich_check(rho, probes, exact_budget(rho)).to_json();
  CHECK(j["id"] == "sandwich");
  CHECK(j["probes"].size() == 4);
  CHECK(j["probes"][0].contains("eps"));
  CHECK(j["probes"][0].contains("lhs"));
  CHECK(j["probes"][0].contains("rhs"));
  CHECK(j["probes"][0].contains("budget"));
  CHECK(j["fitted_constant"].is_null());
  CHECK(j["verdict"] == "pass");
  BoundReport empty;
  CHECK(std::isinf(empty.margin()));
  CHECK(empty.pass());
}
