#include "fhj/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <immintrin.h>

namespace fhj::kernels {
namespace {

constexpr std::size_t kBlock = 512;

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  hi = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, hi));
}

void weighted_row_sum_avx2(std::span<double> out, std::span<const double> w,
                           std::span<const double> rows) {
  const std::size_t len = out.size();
  for (std::size_t i0 = 0; i0 < len; i0 += kBlock) {
    const std::size_t i1 = std::min(len, i0 + kBlock);
    const std::size_t vec_end = i0 + ((i1 - i0) / 4) * 4;
    for (std::size_t i = i0; i < i1; ++i) out[i] = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double wk = w[k];
      const __m256d wv = _mm256_set1_pd(wk);
      const double* row = rows.data() + k * len;
      std::size_t i = i0;
      for (; i < vec_end; i += 4) {
        __m256d acc = _mm256_loadu_pd(out.data() + i);
        __m256d prod = _mm256_mul_pd(wv, _mm256_loadu_pd(row + i));
        _mm256_storeu_pd(out.data() + i, _mm256_add_pd(acc, prod));
      }
      for (; i < i1; ++i) out[i] = out[i] + wk * row[i];
    }
  }
}

void difference_avx2(std::span<double> out, std::span<const double> a,
                     std::span<const double> b) {
  std::size_t i = 0;
  for (; i + 4 <= out.size(); i += 4) {
    _mm256_storeu_pd(out.data() + i,
                     _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  }
  for (; i < out.size(); ++i) out[i] = a[i] - b[i];
}

double max_abs_diff_avx2(std::span<const double> a, std::span<const double> b) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= a.size(); i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    m = _mm256_max_pd(m, abs_pd(d));
  }
  double r = hmax(m);
  for (; i < a.size(); ++i) r = std::max(r, std::fabs(a[i] - b[i]));
  return r;
}

double max_abs_avx2(std::span<const double> a) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= a.size(); i += 4) m = _mm256_max_pd(m, abs_pd(_mm256_loadu_pd(a.data() + i)));
  double r = hmax(m);
  for (; i < a.size(); ++i) r = std::max(r, std::fabs(a[i]));
  return r;
}

bool all_finite_avx2(std::span<const double> a) {
  // x - x is 0 for finite x and NaN otherwise.
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= a.size(); i += 4) {
    __m256d x = _mm256_loadu_pd(a.data() + i);
    __m256d ok = _mm256_cmp_pd(_mm256_sub_pd(x, x), zero, _CMP_EQ_OQ);
    if (_mm256_movemask_pd(ok) != 0xF) return false;
  }
  for (; i < a.size(); ++i)
    if (!std::isfinite(a[i])) return false;
  return true;
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable table{weighted_row_sum_avx2, difference_avx2, max_abs_diff_avx2,
                                 max_abs_avx2, all_finite_avx2};
  return table;
}

}  // namespace fhj::kernels
