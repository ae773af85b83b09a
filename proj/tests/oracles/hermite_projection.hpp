#pragma once

// Chaos coefficients by direct projection: the coefficient of prod h_{k_i}
// in f is E[f(X) prod h_{k_i}(X_i)], and h_k = He_k / sqrt(k!) with He_k
// written out from its explicit sum.

#include <cmath>
#include <map>
#include <vector>

#include "polydens/poly.hpp"

namespace oracle {

inline double double_factorial_moment(unsigned k) {
  if (k % 2) return 0.0;
  double r = 1.0;
  for (unsigned j = 1; j < k; j += 2) r *= j;
  return r;
}

inline double factorial(unsigned k) {
  double r = 1.0;
  for (unsigned j = 2; j <= k; ++j) r *= j;
  return r;
}

/// Power-basis coefficients of He_k: He_k(x) = sum_i (-1)^i k! / (i! (k-2i)! 2^i) x^(k-2i).
inline std::vector<double> he_coefficients(unsigned k) {
  std::vector<double> c(k + 1, 0.0);
  for (unsigned i = 0; 2 * i <= k; ++i) {
    const double sign = i % 2 ? -1.0 : 1.0;
    c[k - 2 * i] = sign * factorial(k) / (factorial(i) * factorial(k - 2 * i) * std::pow(2.0, i));
  }
  return c;
}

/// E[X^j h_k(X)].
inline double project_power(unsigned j, unsigned k) {
  const auto he = he_coefficients(k);
  double s = 0.0;
  for (unsigned p = 0; p <= k; ++p) s += he[p] * double_factorial_moment(j + p);
  return s / std::sqrt(factorial(k));
}

inline double chaos_coefficient(const polydens::Polynomial& f, const polydens::MultiIndex& k) {
  double s = 0.0;
  for (const auto& [e, c] : f.terms()) {
    double term = c;
    for (std::size_t i = 0; i < f.dimension() && term != 0.0; ++i) term *= project_power(e[i], k[i]);
    s += term;
  }
  return s;
}

}  // namespace oracle
