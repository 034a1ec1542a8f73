#include "fhj/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace fhj::kernels {
namespace {

constexpr std::size_t kBlock = 512;

void weighted_row_sum_scalar(std::span<double> out, std::span<const double> w,
                             std::span<const double> rows) {
  const std::size_t len = out.size();
  for (std::size_t i0 = 0; i0 < len; i0 += kBlock) {
    const std::size_t i1 = std::min(len, i0 + kBlock);
    for (std::size_t i = i0; i < i1; ++i) out[i] = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double wk = w[k];
      const double* row = rows.data() + k * len;
      for (std::size_t i = i0; i < i1; ++i) out[i] = out[i] + wk * row[i];
    }
  }
}

void difference_scalar(std::span<double> out, std::span<const double> a,
                       std::span<const double> b) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
}

double max_abs_diff_scalar(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double max_abs_scalar(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

bool all_finite_scalar(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{weighted_row_sum_scalar, difference_scalar,
                                 max_abs_diff_scalar, max_abs_scalar, all_finite_scalar};
  return table;
}

}  // namespace fhj::kernels
