#include "fhj/kernels.hpp"

#include <algorithm>
#include <arm_neon.h>
#include <cmath>

namespace fhj::kernels {
namespace {

constexpr std::size_t kBlock = 512;

void weighted_row_sum_neon(std::span<double> out, std::span<const double> w,
                           std::span<const double> rows) {
  const std::size_t len = out.size();
  for (std::size_t i0 = 0; i0 < len; i0 += kBlock) {
    const std::size_t i1 = std::min(len, i0 + kBlock);
    const std::size_t vec_end = i0 + ((i1 - i0) / 2) * 2;
    for (std::size_t i = i0; i < i1; ++i) out[i] = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double wk = w[k];
      const float64x2_t wv = vdupq_n_f64(wk);
      const double* row = rows.data() + k * len;
      std::size_t i = i0;
      for (; i < vec_end; i += 2) {
        // vmulq + vaddq, not vfmaq: must round like the scalar code.
        float64x2_t prod = vmulq_f64(wv, vld1q_f64(row + i));
        vst1q_f64(out.data() + i, vaddq_f64(vld1q_f64(out.data() + i), prod));
      }
      for (; i < i1; ++i) out[i] = out[i] + wk * row[i];
    }
  }
}

void difference_neon(std::span<double> out, std::span<const double> a,
                     std::span<const double> b) {
  std::size_t i = 0;
  for (; i + 2 <= out.size(); i += 2)
    vst1q_f64(out.data() + i, vsubq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i)));
  for (; i < out.size(); ++i) out[i] = a[i] - b[i];
}

double max_abs_diff_neon(std::span<const double> a, std::span<const double> b) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= a.size(); i += 2)
    m = vmaxq_f64(m, vabdq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i)));
  double r = vmaxvq_f64(m);
  for (; i < a.size(); ++i) r = std::max(r, std::fabs(a[i] - b[i]));
  return r;
}

double max_abs_neon(std::span<const double> a) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= a.size(); i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(a.data() + i)));
  double r = vmaxvq_f64(m);
  for (; i < a.size(); ++i) r = std::max(r, std::fabs(a[i]));
  return r;
}

bool all_finite_neon(std::span<const double> a) {
  std::size_t i = 0;
  for (; i + 2 <= a.size(); i += 2) {
    float64x2_t x = vld1q_f64(a.data() + i);
    uint64x2_t ok = vceqq_f64(vsubq_f64(x, x), vdupq_n_f64(0.0));
    if (vgetq_lane_u64(ok, 0) == 0 || vgetq_lane_u64(ok, 1) == 0) return false;
  }
  for (; i < a.size(); ++i)
    if (!std::isfinite(a[i])) return false;
  return true;
}

}  // namespace

const KernelTable& neon_table() noexcept {
  static const KernelTable table{weighted_row_sum_neon, difference_neon, max_abs_diff_neon,
                                 max_abs_neon, all_finite_neon};
  return table;
}

}  // namespace fhj::kernels
