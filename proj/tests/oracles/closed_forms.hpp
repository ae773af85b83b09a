#pragma once

// Closed-form laws used as references.

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

/// L1 distance between N(0,1) and N(h,1).
inline double gaussian_shift_l1(double h) { return 4.0 * normal_cdf(std::fabs(h) / 2.0) - 2.0; }

/// Density of X1 X2 for independent standard normals.
inline double product_normal_pdf(double x) { return std::cyl_bessel_k(0.0, std::fabs(x)) / std::numbers::pi; }

inline double chisq1_pdf(double x) {
  return x <= 0.0 ? 0.0 : std::exp(-0.5 * x) / std::sqrt(2.0 * std::numbers::pi * x);
}

/// |E exp(i t f)| for f = x1, x1^2 and x1 x2.
inline double cf_modulus_linear(double t) { return std::exp(-0.5 * t * t); }
inline double cf_modulus_square(double t) { return std::pow(1.0 + 4.0 * t * t, -0.25); }
inline double cf_modulus_product(double t) { return 1.0 / std::sqrt(1.0 + t * t); }

/// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
