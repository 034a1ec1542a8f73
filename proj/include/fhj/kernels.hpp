#pragma once

// Data-parallel inner loops of the solver and the verification checks.
//
// Each kernel has a scalar reference implementation and SIMD variants
// (AVX2 on x86-64, NEON on AArch64). The active variant is chosen once at
// first use from the CPU features, or forced through FHJ_SIMD
// (scalar|avx2|neon|auto). All variants keep the per-element operation order
// of the scalar code and never contract into FMA, so results are bitwise
// identical across backends.

#include <cstddef>
#include <span>
#include <string_view>

namespace fhj::kernels {

enum class Backend { scalar, avx2, neon };

std::string_view to_string(Backend b) noexcept;

struct MaxLocation {
  double value = 0.0;
  std::size_t index = 0;  // first index attaining value
};

struct KernelTable {
  // out[i] = sum_k w[k] * rows[k * out.size() + i], accumulated in k order.
  void (*weighted_row_sum)(std::span<double> out, std::span<const double> w,
                           std::span<const double> rows);
  // out[i] = a[i] - b[i]
  void (*difference)(std::span<double> out, std::span<const double> a,
                     std::span<const double> b);
  // max_i |a[i] - b[i]|
  double (*max_abs_diff)(std::span<const double> a, std::span<const double> b);
  // max_i |a[i]|
  double (*max_abs)(std::span<const double> a);
  // true iff every entry is finite
  bool (*all_finite)(std::span<const double> a);
};

const KernelTable& scalar_table() noexcept;
#if defined(FHJ_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(FHJ_HAVE_NEON)
const KernelTable& neon_table() noexcept;
#endif

/// Backends usable on this machine; scalar is always first.
std::span<const Backend> available_backends();

/// Table for a specific backend; throws if it is not available here.
const KernelTable& table(Backend b);

Backend active_backend();
/// Overrides the dispatch choice for the whole process (tests, benchmarks).
void set_active_backend(Backend b);

// Dispatching front ends.
void weighted_row_sum(std::span<double> out, std::span<const double> w,
                      std::span<const double> rows);
void difference(std::span<double> out, std::span<const double> a,
                std::span<const double> b);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
bool all_finite(std::span<const double> a);

/// max |a - b| with the first index attaining it (scan after the SIMD max).
MaxLocation max_abs_diff_at(std::span<const double> a, std::span<const double> b);

}  // namespace fhj::kernels
