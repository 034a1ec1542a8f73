#include "fhj/kernels.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

using namespace fhj;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng) * std::pow(10.0, double(rng() % 7) - 3.0);
  return v;
}

bool same_bits(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  return true;
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 63, 511, 512, 513, 1023, 4099};

}  // namespace

TEST_CASE("scalar backend is always available and listed first") {
  const auto b = kernels::available_backends();
  REQUIRE(!b.empty());
  CHECK(b[0] == kernels::Backend::scalar);
  CHECK(kernels::to_string(kernels::Backend::scalar) == "scalar");
}

TEST_CASE("scalar kernels against direct loops") {
  std::mt19937_64 rng(1);
  const auto& s = kernels::scalar_table();
  for (std::size_t n : kSizes) {
    const auto a = random_vector(n, rng), b = random_vector(n, rng);
    std::vector<double> out(n);
    s.difference(out, a, b);
    double mad = 0.0, ma = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(out[i] == a[i] - b[i]);
      mad = std::max(mad, std::fabs(a[i] - b[i]));
      ma = std::max(ma, std::fabs(a[i]));
    }
    CHECK(s.max_abs_diff(a, b) == mad);
    CHECK(s.max_abs(a) == ma);
    CHECK(s.all_finite(a));
  }
}

TEST_CASE("every backend is bitwise identical to scalar") {
  std::mt19937_64 rng(2);
  const auto& ref = kernels::scalar_table();
  for (auto backend : kernels::available_backends()) {
    const auto& k = kernels::table(backend);
    for (std::size_t n : kSizes) {
      const auto a = random_vector(n, rng), b = random_vector(n, rng);
      std::vector<double> o1(n), o2(n);
      ref.difference(o1, a, b);
      k.difference(o2, a, b);
      CHECK(same_bits(o1, o2));
      CHECK(ref.max_abs_diff(a, b) == k.max_abs_diff(a, b));
      CHECK(ref.max_abs(a) == k.max_abs(a));
      CHECK(ref.all_finite(a) == k.all_finite(a));
      for (std::size_t rows : {1u, 2u, 5u, 33u}) {
        const auto w = random_vector(rows, rng);
        const auto m = random_vector(rows * n, rng);
        std::vector<double> r1(n), r2(n);
        ref.weighted_row_sum(r1, w, m);
        k.weighted_row_sum(r2, w, m);
        CHECK(same_bits(r1, r2));
      }
      if (n > 0) {
        auto bad = a;
        bad[n / 2] = std::numeric_limits<double>::quiet_NaN();
        CHECK_FALSE(k.all_finite(bad));
        bad[n / 2] = -std::numeric_limits<double>::infinity();
        CHECK_FALSE(k.all_finite(bad));
      }
    }
  }
}

TEST_CASE("weighted row sum accumulates in row order") {
  const std::vector<double> w = {1.0, 1e-16, -1.0};
  const std::vector<double> rows = {1.0, 2.0, 1.0, 2.0, 1.0, 2.0};
  for (auto backend : kernels::available_backends()) {
    std::vector<double> out(2);
    kernels::table(backend).weighted_row_sum(out, w, rows);
    // (1 + 1e-16) - 1 = 0 in double; any reordering would give 1e-16.
    CHECK(out[0] == 0.0);
  }
}

TEST_CASE("dispatch override and max location") {
  const auto saved = kernels::active_backend();
  for (auto backend : kernels::available_backends()) {
    kernels::set_active_backend(backend);
    CHECK(kernels::active_backend() == backend);
    const std::vector<double> a = {0.0, 3.0, -1.0, 3.0, 0.5};
    const std::vector<double> b(5, 0.0);
    const auto loc = kernels::max_abs_diff_at(a, b);
    CHECK(loc.value == 3.0);
    CHECK(loc.index == 1);
  }
  kernels::set_active_backend(saved);
}
