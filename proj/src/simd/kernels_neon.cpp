#include <arm_neon.h>

#include "sentorder/simd/kernels.hpp"

namespace sentorder::simd::neon {

double dot(const double* a, const double* b, std::size_t n) noexcept {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double result = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) result += a[i] * b[i];
  return result;
}

double squared_norm(const double* a, std::size_t n) noexcept {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t x0 = vld1q_f64(a + i);
    const float64x2_t x1 = vld1q_f64(a + i + 2);
    acc0 = vfmaq_f64(acc0, x0, x0);
    acc1 = vfmaq_f64(acc1, x1, x1);
  }
  double result = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) result += a[i] * a[i];
  return result;
}

}  // namespace sentorder::simd::neon
