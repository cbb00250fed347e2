#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

// Reduction kernels behind cosine scoring. A scalar reference version is
// always built; SIMD variants are compiled per-ISA and picked at runtime
// from what the CPU reports.
namespace sentorder::simd {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view backend_name(Backend b) noexcept;
Backend parse_backend(std::string_view name);

// Compiled in and supported by the running CPU.
bool backend_available(Backend b) noexcept;
std::vector<Backend> available_backends();

// The backend used by dot()/squared_norm(). Defaults to the widest available.
Backend active_backend() noexcept;
// Throws sentorder::Error if `b` is not available.
void set_backend(Backend b);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);

// Direct access to each variant, used for equivalence testing.
double dot(Backend b, std::span<const double> a, std::span<const double> c);
double squared_norm(Backend b, std::span<const double> a);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double squared_norm(const double* a, std::size_t n) noexcept;
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double squared_norm(const double* a, std::size_t n) noexcept;
}  // namespace avx2

namespace neon {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double squared_norm(const double* a, std::size_t n) noexcept;
}  // namespace neon

}  // namespace sentorder::simd
