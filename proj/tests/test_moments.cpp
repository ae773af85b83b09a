#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/hermite_projection.hpp"
#include "polydens/density.hpp"
#include "polydens/error.hpp"
#include "polydens/moments.hpp"
#include "support/generators.hpp"

using namespace polydens;

namespace {

Polynomial poly(std::size_t n, std::initializer_list<std::pair<MultiIndex, double>> terms) {
  Polynomial f(n);
  for (const auto& [e, c] : terms) f.add_term(e, c);
  return f;
}

// Dense search over the faces {a_p = +-1, |a_j| <= 1} for the c2 constant.
double c2_by_grid(unsigned m, int per_axis) {
  double best = 1e300;
  std::vector<double> a(m);
  std::vector<int> idx(m - 1, 0);
  for (unsigned p = 0; p < m; ++p) {
    std::fill(idx.begin(), idx.end(), 0);
    for (;;) {
      std::size_t k = 0;
      for (unsigned i = 0; i < m; ++i) {
        a[i] = i == p ? 1.0 : -1.0 + 2.0 * idx[k++] / per_axis;
      }
      // E g'^2 = sum_{j,k} j k a_j a_k E X^(j+k-2).
      double e = 0.0;
      for (unsigned j = 1; j <= m; ++j) {
        for (unsigned l = 1; l <= m; ++l) e += j * l * a[j - 1] * a[l - 1] * oracle::double_factorial_moment(j + l - 2);
      }
      best = std::min(best, e / m);
      std::size_t pos = 0;
      while (pos < idx.size() && idx[pos] == per_axis) idx[pos++] = 0;
      if (pos == idx.size()) break;
      ++idx[pos];
    }
  }
  return best;
}

}  // namespace

TEST_CASE("gaussian moments") {
  CHECK(gaussian_moment(0) == 1.0);
  CHECK(gaussian_moment(1) == 0.0);
  CHECK(gaussian_moment(2) == 1.0);
  CHECK(gaussian_moment(4) == 3.0);
  CHECK(gaussian_moment(7) == 0.0);
  CHECK(gaussian_moment(10) == 945.0);
}

TEST_CASE("expectation") {
  CHECK(expectation(poly(2, {{{2, 0}, 1.0}, {{1, 1}, 2.0}, {{0, 0}, 5.0}})) == 6.0);
  CHECK(expectation(poly(2, {{{3, 1}, 1.0}})) == 0.0);
  CHECK(expectation(poly(2, {{{2, 2}, 1.0}})) == 1.0);
  CHECK(expectation(Polynomial(3)) == 0.0);
}

TEST_CASE("variance") {
  CHECK(variance(poly(1, {{{2}, 1.0}})) == 2.0);
  CHECK(variance(poly(2, {{{1, 1}, 1.0}})) == 1.0);
  CHECK(variance(poly(2, {{{2, 1}, 1.0}})) == 3.0);
  CHECK(variance(Polynomial::constant(2, 3.0)) == 0.0);
}

TEST_CASE("central moments") {
  CHECK(central_moment(Polynomial::variable(1, 0), 4) == 3.0);
  CHECK(central_moment(poly(1, {{{2}, 1.0}}), 4) == 60.0);
  CHECK(central_moment(poly(1, {{{2}, 1.0}}), 2) == 2.0);
}

TEST_CASE("hermite expansion of small cases") {
  const auto sq = hermite_expand(poly(1, {{{2}, 1.0}}));
  CHECK(sq.coefficient({0}) == doctest::Approx(oracle::chaos_coefficient(poly(1, {{{2}, 1.0}}), {0})));
  CHECK(sq.coefficient({0}) == doctest::Approx(1.0));
  CHECK(sq.coefficient({2}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(sq.coefficient({1}) == 0.0);

  const auto lin = hermite_expand(Polynomial::variable(1, 0));
  CHECK(lin.coefficient({1}) == 1.0);
  CHECK(lin.coeffs.size() == 1);

  const auto c = hermite_expand(Polynomial::constant(2, -2.5));
  CHECK(c.coefficient({0, 0}) == -2.5);
  CHECK(c.mean() == -2.5);
}

TEST_CASE("variance through the chaos expansion") {
  CHECK(variance_via_hermite(poly(1, {{{2}, 1.0}})) == doctest::Approx(2.0));
  CHECK(variance_via_hermite(poly(2, {{{1, 1}, 1.0}})) == doctest::Approx(1.0));
  CHECK(variance_via_hermite(Polynomial::constant(3, 4.0)) == 0.0);
}

TEST_CASE("property: expansion matches direct projection") {
  std::mt19937_64 rng(31);
  const testgen::Shape shape{3, 3, 6, 6};
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = testgen::random_polynomial(rng, shape);
    const auto h = hermite_expand(f);
    // Compare on every multi-index up to the per-variable power.
    std::vector<unsigned> k(shape.n, 0);
    for (;;) {
      const MultiIndex idx(k);
      CHECK(h.coefficient(idx) == doctest::Approx(oracle::chaos_coefficient(f, idx)).epsilon(1e-10).scale(1.0));
      std::size_t pos = 0;
      while (pos < k.size() && k[pos] == shape.m) k[pos++] = 0;
      if (pos == k.size()) break;
      ++k[pos];
    }
  }
}

TEST_CASE("property: the two variance routes agree") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<unsigned> nd(1, 4), md(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    testgen::Shape shape;
    shape.n = nd(rng);
    shape.m = md(rng);
    shape.d = std::min(6u, shape.n * shape.m);
    shape.max_terms = 8;
    const auto f = testgen::random_polynomial(rng, shape);
    const double v = variance(f);
    CHECK(std::fabs(v - variance_via_hermite(f)) <= 1e-9 * (1.0 + v));
    CHECK(hermite_expand(f).squared_norm() == doctest::Approx(expectation(multiply(f, f))).epsilon(1e-9));
  }
}

TEST_CASE("property: reconstruction of f from its expansion") {
  std::mt19937_64 rng(8);
  const testgen::Shape shape{3, 3, 6, 8};
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = testgen::random_polynomial(rng, shape);
    const auto h = hermite_expand(f);
    for (int k = 0; k < 50; ++k) {
      const auto x = testgen::random_point(rng, shape.n, 2.0);
      const double expected = evaluate(f, x);
      CHECK(std::fabs(evaluate(h, x) - expected) <= 1e-9 * (1.0 + std::fabs(expected)));
    }
  }
}

TEST_CASE("Monte Carlo variance within four standard errors") {
  std::mt19937_64 rng(77);
  const testgen::Shape shape{3, 2, 4, 5};
  constexpr std::size_t kN = 1'000'000;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = testgen::random_polynomial(rng, shape);
    const auto s = sample(f, kN, 1000 + trial);
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= kN;
    double m2 = 0.0, m4 = 0.0;
    for (double v : s.values) {
      const double c = (v - mean) * (v - mean);
      m2 += c;
      m4 += c * c;
    }
    m2 /= kN;
    m4 /= kN;
    const double se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / kN);
    CHECK(std::fabs(m2 - variance(f)) <= 4.0 * se + 1e-12);
  }
}

TEST_CASE("one-dimensional variance lower bound") {
  CHECK(variance_lower_bound_1d(Polynomial::variable(1, 0), 1) == 1.0);
  CHECK(variance(Polynomial::variable(1, 0)) == 1.0);
  CHECK(variance_lower_bound_1d(poly(1, {{{2}, 1.0}}), 2) == 2.0);
  const auto he3 = poly(1, {{{3}, 1.0}, {{1}, -3.0}});
  CHECK(variance_lower_bound_1d(he3, 3) == 6.0);
  CHECK(variance(he3) == 6.0);
  try {
    (void)variance_lower_bound_1d(poly(1, {{{3}, 1.0}}), 2);
    FAIL("expected DegreeExceedsM");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegreeExceedsM);
  }
  CHECK_THROWS_AS(variance_lower_bound_1d(Polynomial::variable(2, 0), 1), Error);
}

TEST_CASE("c2 constant is the exact minimum") {
  CHECK(c2_constant(1) == doctest::Approx(1.0));
  CHECK(c2_constant(2) == doctest::Approx(0.5));
  for (unsigned m = 2; m <= 4; ++m) {
    const double grid = c2_by_grid(m, m <= 3 ? 400 : 60);
    const double exact = c2_constant(m);
    CHECK(exact > 0.0);
    CHECK(exact <= grid + 1e-12);
    CHECK(exact >= grid - 0.02 * grid);
  }
}

TEST_CASE("property: lower bound chain for univariate polynomials") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<unsigned> md(1, 4);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned m = md(rng);
    Polynomial g(1);
    for (unsigned j = 0; j <= m; ++j) g.add_term({j}, coef(rng));
    if (g.is_zero() || degree(g) == 0) continue;
    const double lb = variance_lower_bound_1d(g, m);
    CHECK(variance(g) >= lb - 1e-9 * (1.0 + lb));
    CHECK(lb >= c2_constant(m) * max_nonconstant_coefficient_sq(g) * (1.0 - 1e-9));
  }
}

TEST_CASE("base case: variance over squared leading magnitude stays positive") {
  std::mt19937_64 rng(12);
  double worst = 1e300;
  for (int trial = 0; trial < 200; ++trial) {
    const ClassParams p{2, 2, 2};
    const auto f = random_in_class(p, static_cast<std::uint64_t>(trial));
    const double a = leading_magnitude(f).magnitude;
    worst = std::min(worst, variance(f) / (a * a));
  }
  MESSAGE("fitted base-case constant for n=2, m=d=2: " << worst);
  CHECK(worst > 0.0);
}
