// AArch64 NEON kernels. Advanced SIMD is mandatory on AArch64, so no runtime
// check is needed. The characteristic-function sums reuse the scalar kernel.

#include <arm_neon.h>

#include <cmath>

#include "polydens/simd/kernels.hpp"

namespace polydens::simd {

namespace {

double l1_distance_neon(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vabdq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i)));
    acc1 = vaddq_f64(acc1, vabdq_f64(vld1q_f64(a.data() + i + 2), vld1q_f64(b.data() + i + 2)));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double abs_sum_neon(std::span<const double> a) {
  const std::size_t n = a.size();
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(a.data() + i)));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double dot_neon(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a.data() + i), vld1q_f64(b.data() + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a.data() + i + 2), vld1q_f64(b.data() + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

CenteredSums centered_sums_neon(std::span<const double> v, double c) {
  const std::size_t n = v.size();
  const float64x2_t cv = vdupq_n_f64(c);
  float64x2_t s1 = vdupq_n_f64(0.0);
  float64x2_t s2 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(v.data() + i), cv);
    s1 = vaddq_f64(s1, d);
    s2 = vfmaq_f64(s2, d, d);
  }
  CenteredSums out{vaddvq_f64(s1), vaddvq_f64(s2)};
  for (; i < n; ++i) {
    const double d = v[i] - c;
    out.s1 += d;
    out.s2 += d * d;
  }
  return out;
}

}  // namespace

namespace detail {
extern const KernelTable kNeonTable;
const KernelTable kNeonTable{Isa::Neon,         l1_distance_neon, abs_sum_neon, dot_neon,
                             kScalarTable.cf_sums, centered_sums_neon};
}  // namespace detail

}  // namespace polydens::simd
