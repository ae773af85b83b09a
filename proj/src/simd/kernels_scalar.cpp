#include <cmath>

#include "polydens/simd/kernels.hpp"

namespace polydens::simd {

namespace {

double l1_distance_scalar(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double abs_sum_scalar(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += std::fabs(x);
  return s;
}

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

CfSums cf_sums_scalar(std::span<const double> v, double t) {
  CfSums out;
  for (double x : v) {
    const double arg = t * x;
    out.re += std::cos(arg);
    out.im += std::sin(arg);
  }
  return out;
}

CenteredSums centered_sums_scalar(std::span<const double> v, double c) {
  CenteredSums out;
  for (double x : v) {
    const double d = x - c;
    out.s1 += d;
    out.s2 += d * d;
  }
  return out;
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Isa::Scalar,   l1_distance_scalar, abs_sum_scalar,
                               dot_scalar,    cf_sums_scalar,     centered_sums_scalar};
}  // namespace detail

}  // namespace polydens::simd
