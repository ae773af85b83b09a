#pragma once

// Exact moments of f(X) for X standard Gaussian with independent
// coordinates, by two independent routes: monomial moments E X^k = (k-1)!!
// and the orthonormal Hermite (Wiener chaos) expansion.

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "polydens/poly.hpp"

namespace polydens {

/// E X^k for X ~ N(0,1).
double gaussian_moment(unsigned k);

double expectation(const Polynomial& f);

/// E f^2 - (E f)^2 without clipping; may be slightly negative from roundoff.
double raw_variance(const Polynomial& f);

/// raw_variance clipped at zero.
double variance(const Polynomial& f);

/// E (f - E f)^k.
double central_moment(const Polynomial& f, unsigned k);

/// Coefficients of f in the basis prod_i h_{k_i}(x_i), h_k = He_k / sqrt(k!).
struct HermiteExpansion {
  std::size_t n = 0;
  std::map<MultiIndex, double> coeffs;

  double coefficient(const MultiIndex& k) const;
  double mean() const { return coefficient(MultiIndex::zeros(n)); }
  /// Sum of squared coefficients, which equals E f^2.
  double squared_norm() const;
};

HermiteExpansion hermite_expand(const Polynomial& f);

double evaluate(const HermiteExpansion& h, std::span<const double> x);

/// h_0(x), ..., h_kmax(x) via h_{k+1} = (x h_k - sqrt(k) h_{k-1}) / sqrt(k+1).
std::vector<double> hermite_values(unsigned kmax, double x);

/// Sum of squared non-constant chaos coefficients.
double variance_via_hermite(const Polynomial& f);

/// (1/m) E g'(X)^2 for a univariate g of degree at most m. It never exceeds
/// the variance of g(X).
double variance_lower_bound_1d(const Polynomial& g, unsigned m);

/// min (1/m) E g'(X)^2 over univariate g of degree <= m whose non-constant
/// coefficients satisfy max_j |a_j| = 1. Exact: the quadratic program is
/// solved face by face with all active sets enumerated.
double c2_constant(unsigned m);

/// max_{1 <= j <= m} a_j^2 for a univariate g.
double max_nonconstant_coefficient_sq(const Polynomial& g);

}  // namespace polydens
