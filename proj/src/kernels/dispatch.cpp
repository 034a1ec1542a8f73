#include "fhj/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace fhj::kernels {
namespace {

bool cpu_has(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(FHJ_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::neon:
#if defined(FHJ_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend detect() {
  const char* env = std::getenv("FHJ_SIMD");
  const std::string want = env ? env : "auto";
  if (want == "scalar") return Backend::scalar;
  if (want == "avx2" && cpu_has(Backend::avx2)) return Backend::avx2;
  if (want == "neon" && cpu_has(Backend::neon)) return Backend::neon;
  if (cpu_has(Backend::avx2)) return Backend::avx2;
  if (cpu_has(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

std::atomic<const KernelTable*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t) return *t;
  set_active_backend(detect());
  return *g_active.load(std::memory_order_acquire);
}

}  // namespace

std::string_view to_string(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

std::span<const Backend> available_backends() {
  static const std::vector<Backend> list = [] {
    std::vector<Backend> v{Backend::scalar};
    if (cpu_has(Backend::avx2)) v.push_back(Backend::avx2);
    if (cpu_has(Backend::neon)) v.push_back(Backend::neon);
    return v;
  }();
  return list;
}

const KernelTable& table(Backend b) {
  if (!cpu_has(b))
    throw std::invalid_argument("SIMD backend not available: " + std::string(to_string(b)));
  switch (b) {
    case Backend::scalar:
      return scalar_table();
#if defined(FHJ_HAVE_AVX2)
    case Backend::avx2:
      return avx2_table();
#endif
#if defined(FHJ_HAVE_NEON)
    case Backend::neon:
      return neon_table();
#endif
    default:
      break;
  }
  return scalar_table();
}

Backend active_backend() {
  active();
  return g_backend.load(std::memory_order_acquire);
}

void set_active_backend(Backend b) {
  const KernelTable& t = table(b);
  g_backend.store(b, std::memory_order_release);
  g_active.store(&t, std::memory_order_release);
}

void weighted_row_sum(std::span<double> out, std::span<const double> w,
                      std::span<const double> rows) {
  active().weighted_row_sum(out, w, rows);
}

void difference(std::span<double> out, std::span<const double> a, std::span<const double> b) {
  active().difference(out, a, b);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return active().max_abs_diff(a, b);
}

double max_abs(std::span<const double> a) { return active().max_abs(a); }

bool all_finite(std::span<const double> a) { return active().all_finite(a); }

MaxLocation max_abs_diff_at(std::span<const double> a, std::span<const double> b) {
  MaxLocation loc;
  loc.value = max_abs_diff(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) == loc.value) {
      loc.index = i;
      break;
    }
  }
  return loc;
}

}  // namespace fhj::kernels
