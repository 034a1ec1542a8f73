#include "fhj/fracops.hpp"
#include "fhj/specialfun.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace fhj;
namespace sf = fhj::specialfun;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected fhj::Error");
  return ErrorCode::io;
}

std::vector<double> sample(const TimeFunction& f, const TimeGrid& g) {
  std::vector<double> v(g.steps() + 1);
  for (std::size_t n = 0; n <= g.steps(); ++n) v[n] = f(g.node(n));
  return v;
}

// Direct L1 sum: (1/(Gamma(2-a) dt^a)) sum_j b_j (f_{n-j} - f_{n-j-1}).
double l1_reference(const std::vector<double>& f, double dt, double a, std::size_t n) {
  long double s = 0.0L;
  for (std::size_t j = 0; j < n; ++j) {
    const long double b = std::pow((long double)(j + 1), 1.0L - a) - (j == 0 ? 0.0L : std::pow((long double)j, 1.0L - a));
    s += b * ((long double)f[n - j] - f[n - j - 1]);
  }
  return double(s / (std::tgamma(2.0 - a) * std::pow(dt, a)));
}

}  // namespace

TEST_CASE("l1 weights") {
  const auto w1 = fracops::l1_weights(FractionalOrder(1.0), 50);
  CHECK(w1[0] == 1.0);
  for (std::size_t j = 1; j < w1.size(); ++j) CHECK(w1[j] == 0.0);

  const auto w = fracops::l1_weights(FractionalOrder(0.5), 4);
  CHECK(w[0] == 1.0);
  CHECK(w[1] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));

  for (double a : {0.1, 0.3, 0.5, 0.9}) {
    const auto b = fracops::l1_weights(FractionalOrder(a), 1000);
    double sum = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      CHECK(b[j] > 0.0);
      if (j > 0) CHECK(b[j] < b[j - 1]);
      sum += b[j];
    }
    // Telescoping sum: n^{1-alpha}.
    CHECK(sum == doctest::Approx(std::pow(1000.0, 1.0 - a)).epsilon(1e-12));
  }
  CHECK(code_of([] { fracops::l1_weights(FractionalOrder(0.5), 0); }) == ErrorCode::domain);
}

TEST_CASE("time grid") {
  const TimeGrid g(0.7, 7);
  CHECK(g.dt() * 7 == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(g.node(7) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(code_of([] { TimeGrid(0.0, 4); }) == ErrorCode::domain);
  CHECK(code_of([] { TimeGrid(1.0, 0); }) == ErrorCode::domain);
}

TEST_CASE("caputo_l1 examples") {
  const TimeGrid g(1.0, 1024);
  const FractionalOrder half(0.5);
  const std::vector<double> constant(g.steps() + 1, 3.25);
  for (std::size_t n : {1u, 17u, 1024u}) CHECK(fracops::caputo_l1(constant, g, half, n) == 0.0);

  const auto ta = sample([](double t) { return std::sqrt(t); }, g);
  CHECK(std::fabs(fracops::caputo_l1(ta, g, half, 1024) - sf::gamma(1.5)) <= 1e-2);

  // (t - 0.3)^2 started at 0: 2 (t - 1.5 * 0.3) t^{1/2} / Gamma(2.5) at t = 1.
  const auto quad = sample([](double t) { return (t - 0.3) * (t - 0.3); }, g);
  const double exact = 2.0 * (1.0 - 1.5 * 0.3) / sf::gamma(2.5);
  CHECK(std::fabs(fracops::caputo_l1(quad, g, half, 1024) - exact) <= 1e-3);

  CHECK(code_of([&] { fracops::caputo_l1(ta, g, half, 0); }) == ErrorCode::node_out_of_range);
  CHECK(code_of([&] { fracops::caputo_l1(ta, g, half, 1025); }) == ErrorCode::node_out_of_range);
  CHECK(code_of([&] { fracops::caputo_l1(std::span(ta).first(10), g, half, 5); }) == ErrorCode::domain);
}

TEST_CASE("caputo_l1 matches an extended-precision direct sum") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double a : {0.2, 0.5, 0.9, 1.0}) {
    const TimeGrid g(2.0, 200);
    std::vector<double> f(201);
    for (auto& v : f) v = u(rng);
    for (std::size_t n : {1u, 2u, 77u, 200u}) {
      const double ref = l1_reference(f, g.dt(), a, n);
      CHECK(std::fabs(fracops::caputo_l1(f, g, FractionalOrder(a), n) - ref) <= 1e-12 * std::max(1.0, std::fabs(ref)));
    }
  }
}

TEST_CASE("caputo_l1 order on t^2") {
  const FractionalOrder half(0.5);
  const double exact = 2.0 / sf::gamma(2.5);
  double prev = 0.0;
  for (std::size_t N = 64; N <= 2048; N *= 2) {
    const TimeGrid g(1.0, N);
    const double err = std::fabs(fracops::caputo_l1(sample([](double t) { return t * t; }, g), g, half, N) - exact);
    if (prev > 0.0) CHECK(prev / err >= std::pow(2.0, 1.5 * 0.9));
    prev = err;
  }
}

TEST_CASE("caputo_l1 is linear") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const TimeGrid g(1.0, 300);
  const FractionalOrder al(0.35);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> f(301), h(301), mix(301);
    const double a = u(rng) * 3, b = u(rng) * 3;
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = u(rng);
      h[i] = u(rng);
      mix[i] = a * f[i] + b * h[i];
    }
    const std::size_t n = 1 + rng() % 300;
    const double lhs = fracops::caputo_l1(mix, g, al, n);
    const double rhs = a * fracops::caputo_l1(f, g, al, n) + b * fracops::caputo_l1(h, g, al, n);
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(lhs)) * 300);
  }
}

TEST_CASE("history split") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double a : {0.25, 0.6, 1.0}) {
    const FractionalOrder al(a);
    const TimeGrid g(1.5, 120);
    std::vector<double> f(121);
    for (auto& v : f) v = u(rng);
    for (std::size_t n : {1u, 2u, 50u, 120u}) {
      const auto split = fracops::caputo_l1_history(std::span(f).first(n), g, al, n);
      CHECK(split.diag_coeff == doctest::Approx(fracops::l1_diag_coeff(al, g.dt())));
      CHECK(split.diag_coeff > 0.0);
      const double full = fracops::caputo_l1(f, g, al, n);
      CHECK(std::fabs(split.diag_coeff * f[n] + split.history_sum - full) <= 1e-13 * std::max(1.0, std::fabs(full)) * 10);
      if (n == 1) CHECK(split.history_sum == doctest::Approx(-split.diag_coeff * f[0]));
      if (a == 1.0) CHECK(split.diag_coeff == doctest::Approx(1.0 / g.dt()));
    }
  }
  const std::vector<double> f(5, 1.0);
  CHECK(code_of([&] { fracops::caputo_l1_history(std::span(f).first(3), TimeGrid(1.0, 4), FractionalOrder(0.5), 4); }) ==
        ErrorCode::domain);
}

TEST_CASE("running maximum gives a nonnegative l1 derivative") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    const TimeGrid g(1.0, 64);
    std::vector<double> f(65);
    for (auto& v : f) v = nd(rng);
    double running = f[0];
    for (std::size_t n = 1; n <= 64; ++n) {
      running = std::max(running, f[n - 1]);
      if (f[n] >= running) CHECK(fracops::caputo_l1(f, g, FractionalOrder(0.1 + 0.8 * (trial % 9) / 8.0), n) >= 0.0);
    }
  }
}

TEST_CASE("l1 history matches caputo_l1 across many signals") {
  const FractionalOrder al(0.4);
  const TimeGrid g(1.0, 40);
  const std::size_t width = 37;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> sig(width, std::vector<double>(41));
  for (auto& s : sig)
    for (auto& v : s) v = u(rng);
  fracops::L1History hist(al, g, width);
  CHECK(hist.step_scale() * hist.diag_coeff() == doctest::Approx(1.0));
  std::vector<double> inc(width), lag(width);
  for (std::size_t m = 1; m <= 40; ++m) {
    hist.lagged_sum(lag);
    for (std::size_t i = 0; i < width; ++i) {
      // caputo_l1 = diag * (f_m - f_{m-1} + lag).
      const double via_hist = hist.diag_coeff() * (sig[i][m] - sig[i][m - 1] + lag[i]);
      CHECK(std::fabs(via_hist - fracops::caputo_l1(sig[i], g, al, m)) <= 1e-12);
      inc[i] = sig[i][m] - sig[i][m - 1];
    }
    hist.push(inc);
  }
}

TEST_CASE("k0 examples") {
  const FractionalOrder half(0.5);
  CHECK(fracops::k0_eval([](double) { return 2.5; }, 1.0, half).value == 0.0);
  CHECK(std::fabs(fracops::k0_eval([](double t) { return t; }, 1.0, half).value - 1.0 / sf::gamma(1.5)) <= 1e-9);
  CHECK(std::fabs(fracops::k0_eval([](double t) { return std::sqrt(t); }, 1.0, half).value - sf::gamma(1.5)) <= 1e-9);
  CHECK(std::fabs(fracops::k0_eval([](double t) { return t * t; }, 0.5, FractionalOrder(0.3)).value -
                  2.0 * std::pow(0.5, 1.7) / sf::gamma(2.7)) <= 1e-9);
  // Classical limit is the derivative.
  CHECK(fracops::k0_eval([](double t) { return std::sin(t); }, 0.7, FractionalOrder(1.0)).value ==
        doctest::Approx(std::cos(0.7)).epsilon(1e-8));
}

TEST_CASE("k0 splits into jr and kr") {
  const FractionalOrder half(0.5);
  const TimeFunction sq = [](double t) { return t * t; };
  const double k0 = fracops::k0_eval(sq, 1.0, half).value;
  const double jr = fracops::jr_eval(sq, 1.0, 0.5, half).value;
  const double kr = fracops::kr_eval(sq, 1.0, 0.5, half).value;
  CHECK(std::fabs(jr + kr - k0) <= 1e-8);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const TimeFunction smooth = [](double t) { return std::sin(3.0 * t) + t * t; };
  for (int k = 0; k < 20; ++k) {
    const double r = u(rng);
    const FractionalOrder al(0.2 + 0.7 * u(rng));
    CHECK(std::fabs(fracops::jr_eval(smooth, 1.0, r, al).value + fracops::kr_eval(smooth, 1.0, r, al).value -
                    fracops::k0_eval(smooth, 1.0, al).value) <= 1e-8);
  }

  const TimeFunction c = [](double) { return -4.0; };
  CHECK(fracops::jr_eval(c, 1.0, 0.3, half).value == 0.0);
  CHECK(fracops::kr_eval(c, 1.0, 0.3, half).value == 0.0);
}

TEST_CASE("kr near the upper limit keeps only the boundary term") {
  const FractionalOrder half(0.5);
  const TimeFunction f = [](double t) { return std::exp(t); };
  const double boundary = (std::exp(1.0) - 1.0) / sf::gamma(0.5);
  const double kr = fracops::kr_eval(f, 1.0, 0.999, half).value;
  // The remaining integral over [0.999, 1] is bounded by sup|f'| tau^{-1/2} terms.
  CHECK(kr >= boundary);
  CHECK(kr - boundary <= 0.5 / sf::gamma(0.5) * std::exp(1.0) * 2.0 * (std::pow(0.999, -0.5) - 1.0) + 1e-9);
}

TEST_CASE("jr is shift invariant") {
  const TimeFunction f = [](double t) { return std::cos(2.0 * t); };
  for (double c : {-3.0, 0.5, 100.0}) {
    const TimeFunction g = [&](double t) { return std::cos(2.0 * t) + c; };
    for (double a : {0.3, 0.7}) {
      const double lhs = fracops::jr_eval(g, 1.0, 0.4, FractionalOrder(a)).value;
      const double rhs = fracops::jr_eval(f, 1.0, 0.4, FractionalOrder(a)).value;
      // Exact in real arithmetic; f(t) - f(t - tau) loses digits of order |c| eps.
      CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(c)));
    }
  }
}

TEST_CASE("operator domains and divergence") {
  const FractionalOrder half(0.5);
  const TimeFunction f = [](double t) { return t; };
  CHECK(code_of([&] { fracops::k0_eval(f, 0.0, half); }) == ErrorCode::domain);
  CHECK(code_of([&] { fracops::jr_eval(f, 1.0, 1.0, half); }) == ErrorCode::domain);
  CHECK(code_of([&] { fracops::kr_eval(f, 1.0, 0.0, half); }) == ErrorCode::domain);
  fracops::QuadratureConfig bad;
  bad.split_r = 1.0;
  CHECK(code_of([&] { fracops::k0_eval(f, 1.0, half, bad); }) == ErrorCode::domain);
  bad = {};
  bad.panels = 4;
  CHECK(code_of([&] { fracops::k0_eval(f, 1.0, half, bad); }) == ErrorCode::domain);
  // Slope 1 near t cannot respect a bound of 1e-3.
  CHECK(code_of([&] { fracops::k0_eval(f, 1.0, half, {}, 1e-3); }) == ErrorCode::divergence);
  CHECK_NOTHROW(fracops::k0_eval(f, 1.0, half, {}, 1.0 + 1e-9));
  // A kink of slope 1e6 just below t.
  const TimeFunction kink = [](double t) { return t < 1.0 - 1e-6 ? 0.0 : 1e6 * (t - 1.0 + 1e-6); };
  CHECK(code_of([&] { fracops::k0_eval(kink, 1.0, half, {}, 10.0); }) == ErrorCode::divergence);
}

TEST_CASE("interpolated signal feeds the quadrature operators") {
  const TimeGrid g(1.0, 4096);
  const FractionalOrder al(0.5);
  const auto v = sample([](double t) { return t * t; }, g);
  const TimeFunction lin = fracops::interpolate(v, g);
  CHECK(lin(0.5) == doctest::Approx(0.25).epsilon(1e-6));
  const double k0 = fracops::k0_eval(lin, 1.0, al).value;
  CHECK(std::fabs(k0 - 2.0 / sf::gamma(2.5)) <= 1e-3);
}
