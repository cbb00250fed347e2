#include <atomic>

#include "sentorder/error.hpp"
#include "sentorder/simd/kernels.hpp"

namespace sentorder::simd {
namespace {

struct KernelTable {
  Backend backend;
  double (*dot)(const double*, const double*, std::size_t) noexcept;
  double (*squared_norm)(const double*, std::size_t) noexcept;
};

constexpr KernelTable kScalarTable{Backend::kScalar, &scalar::dot, &scalar::squared_norm};
#if defined(SENTORDER_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Backend::kAvx2, &avx2::dot, &avx2::squared_norm};
#endif
#if defined(SENTORDER_HAVE_NEON)
constexpr KernelTable kNeonTable{Backend::kNeon, &neon::dot, &neon::squared_norm};
#endif

const KernelTable* table_for(Backend b) noexcept {
  switch (b) {
    case Backend::kScalar:
      return &kScalarTable;
    case Backend::kAvx2:
#if defined(SENTORDER_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2Table;
#endif
      return nullptr;
    case Backend::kNeon:
#if defined(SENTORDER_HAVE_NEON)
      return &kNeonTable;  // mandatory on AArch64
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable* best_table() noexcept {
  for (Backend b : {Backend::kAvx2, Backend::kNeon}) {
    if (const KernelTable* t = table_for(b)) return t;
  }
  return &kScalarTable;
}

std::atomic<const KernelTable*>& active() noexcept {
  static std::atomic<const KernelTable*> table{best_table()};
  return table;
}

const KernelTable& require(Backend b) {
  const KernelTable* t = table_for(b);
  if (t == nullptr) {
    throw Error("SIMD backend '" + std::string(backend_name(b)) + "' is not available");
  }
  return *t;
}

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("dot: vector lengths differ");
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "?";
}

Backend parse_backend(std::string_view name) {
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
    if (name == backend_name(b)) return b;
  }
  throw Error("unknown SIMD backend '" + std::string(name) + "'");
}

bool backend_available(Backend b) noexcept { return table_for(b) != nullptr; }

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
    if (backend_available(b)) out.push_back(b);
  }
  return out;
}

Backend active_backend() noexcept { return active().load(std::memory_order_relaxed)->backend; }

void set_backend(Backend b) { active().store(&require(b), std::memory_order_relaxed); }

double dot(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  return active().load(std::memory_order_relaxed)->dot(a.data(), b.data(), a.size());
}

double squared_norm(std::span<const double> a) {
  return active().load(std::memory_order_relaxed)->squared_norm(a.data(), a.size());
}

double dot(Backend backend, std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  return require(backend).dot(a.data(), b.data(), a.size());
}

double squared_norm(Backend backend, std::span<const double> a) {
  return require(backend).squared_norm(a.data(), a.size());
}

}  // namespace sentorder::simd
