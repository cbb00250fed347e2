#include "sentorder/simd/kernels.hpp"

namespace sentorder::simd::scalar {

// Reference kernels: one accumulator, strictly left-to-right.
double dot(const double* a, const double* b, std::size_t n) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_norm(const double* a, std::size_t n) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

}  // namespace sentorder::simd::scalar
