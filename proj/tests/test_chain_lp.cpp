#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles/chain_lp_vertices.hpp"
#include "polydens/chain_lp.hpp"
#include "polydens/error.hpp"

using namespace polydens;

namespace {

std::vector<double> random_costs(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> law;
  std::vector<double> c(n);
  for (auto& x : c) x = law(rng);
  // Some instances sum to zero, as the costs of a density difference do.
  if (rng() % 2 == 0) {
    double s = 0.0;
    for (double x : c) s += x;
    for (auto& x : c) x -= s / static_cast<double>(n);
  }
  return c;
}

void check_feasible(const ChainLpResult& r, std::span<const double> c, double bound, double step) {
  REQUIRE(r.phi.size() == c.size());
  const double tol = 1e-9 * (1.0 + bound + step);
  double value = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    CHECK(std::fabs(r.phi[j]) <= bound + tol);
    if (j + 1 < c.size()) CHECK(std::fabs(r.phi[j + 1] - r.phi[j]) <= step + tol);
    value += c[j] * r.phi[j];
  }
  CHECK(value == doctest::Approx(r.value).epsilon(1e-9).scale(1.0));
}

}  // namespace

TEST_CASE("sweep and simplex agree with vertex enumeration") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pos(0.05, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const auto c = random_costs(rng, n);
    const double bound = pos(rng);
    const double step = pos(rng) * (trial % 3 == 0 ? 0.1 : 1.0);
    CAPTURE(trial);
    const double expected = oracle::chain_lp_by_vertices(c, bound, step);
    const auto sweep = solve_chain_lp(c, bound, step, LpMethod::Sweep);
    const auto simplex = solve_chain_lp(c, bound, step, LpMethod::Simplex);
    CHECK(sweep.value == doctest::Approx(expected).epsilon(1e-10).scale(1.0));
    CHECK(simplex.value == doctest::Approx(expected).epsilon(1e-10).scale(1.0));
    check_feasible(sweep, c, bound, step);
    check_feasible(simplex, c, bound, step);
  }
}

TEST_CASE("sweep and simplex agree on larger chains") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {40u, 120u, 201u}) {
    const auto c = random_costs(rng, n);
    for (double bound : {0.01, 0.2, 5.0}) {
      const double step = 0.05;
      const auto sweep = solve_chain_lp(c, bound, step, LpMethod::Sweep);
      const auto simplex = solve_chain_lp(c, bound, step, LpMethod::Simplex);
      CHECK(sweep.value == doctest::Approx(simplex.value).epsilon(1e-10).scale(1.0));
      check_feasible(sweep, c, bound, step);
      check_feasible(simplex, c, bound, step);
    }
  }
}

TEST_CASE("uniform density costs give min(2 bound, length)") {
  // Edge costs of the indicator of [0, 1] on G bins: -1 at the left edge and
  // +1 at the right edge, since the integral of phi' is phi(1) - phi(0).
  constexpr std::size_t kBins = 100;
  std::vector<double> c(kBins + 1, 0.0);
  c.front() = -1.0;
  c.back() = 1.0;
  const double step = 1.0 / kBins;
  for (double bound : {0.05, 0.2, 0.5, 10.0}) {
    for (auto method : {LpMethod::Sweep, LpMethod::Simplex}) {
      CHECK(solve_chain_lp(c, bound, step, method).value == doctest::Approx(std::min(2.0 * bound, 1.0)));
    }
  }
}

TEST_CASE("degenerate and invalid inputs") {
  const std::vector<double> c{1.0, -2.0, 0.5};
  CHECK(solve_chain_lp(c, 0.0, 1.0).value == 0.0);
  CHECK_THROWS_AS(solve_chain_lp(std::vector<double>{}, 1.0, 1.0), Error);
  CHECK(solve_chain_lp(std::vector<double>{-3.0}, 2.0, 1.0).value == doctest::Approx(6.0));
  for (auto bad : {std::pair{-1.0, 1.0}, std::pair{1.0, 0.0}, std::pair{1.0, -1.0}, std::pair{std::nan(""), 1.0}}) {
    try {
      (void)solve_chain_lp(c, bad.first, bad.second);
      FAIL("expected InvalidArgument");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InvalidArgument);
    }
  }
  const std::vector<double> nan_cost{1.0, std::nan("")};
  CHECK_THROWS_AS(solve_chain_lp(nan_cost, 1.0, 1.0), Error);
}

TEST_CASE("property: value is homogeneous, nondecreasing and concave in the bound") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = random_costs(rng, 60);
    const double step = 0.03;
    const double base = solve_chain_lp(c, 0.4, step).value;
    CHECK(solve_chain_lp(c, 0.8, 2.0 * step).value == doctest::Approx(2.0 * base).epsilon(1e-10).scale(1.0));
    double prev = 0.0, prev_slope = HUGE_VAL;
    for (int k = 1; k <= 40; ++k) {
      const double b = 0.025 * k;
      const double v = solve_chain_lp(c, b, step).value;
      const double slope = (v - prev) / 0.025;
      CHECK(slope >= -1e-9);
      CHECK(slope <= prev_slope + 1e-7);
      prev = v;
      prev_slope = slope;
    }
  }
}
