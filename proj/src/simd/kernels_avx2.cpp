// Built with -mavx2 -mfma. Only reached after the runtime CPU check.
#include <immintrin.h>

#include "sentorder/simd/kernels.hpp"

namespace sentorder::simd::avx2 {
namespace {

inline double hsum(__m256d v) noexcept {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) noexcept {
  // Two independent chains hide FMA latency.
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double result = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) result += a[i] * b[i];
  return result;
}

double squared_norm(const double* a, std::size_t n) noexcept {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d x0 = _mm256_loadu_pd(a + i);
    const __m256d x1 = _mm256_loadu_pd(a + i + 4);
    acc0 = _mm256_fmadd_pd(x0, x0, acc0);
    acc1 = _mm256_fmadd_pd(x1, x1, acc1);
  }
  if (i + 4 <= n) {
    const __m256d x = _mm256_loadu_pd(a + i);
    acc0 = _mm256_fmadd_pd(x, x, acc0);
    i += 4;
  }
  double result = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) result += a[i] * a[i];
  return result;
}

}  // namespace sentorder::simd::avx2
