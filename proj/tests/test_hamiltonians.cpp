#include "fhj/hamiltonians.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace fhj;

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

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("lax-friedrichs is consistent") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const TorusGrid grid(2, 16);
  const HamiltonianSpec specs[] = {
      hamiltonians::zero(), hamiltonians::constant(2.0), hamiltonians::transport_constant({1.0, -0.5}, 2),
      hamiltonians::eikonal([](std::span<const double> x) { return 1.0 + 0.5 * std::sin(2 * kPi * x[0]); }, 1.5,
                            kPi, 0.3)};
  for (const auto& h : specs) {
    for (int k = 0; k < 100; ++k) {
      const double x[2] = {u(rng) / 5 + 0.5, u(rng) / 5 + 0.5};
      const double p[2] = {u(rng), u(rng)};
      const double r = u(rng), t = std::fabs(u(rng)) / 5;
      CHECK(lax_friedrichs(h, t, x, r, p, p, 3.0) == h(t, x, r, p));
    }
  }
}

TEST_CASE("lax-friedrichs arithmetic") {
  const auto h = hamiltonians::transport_constant({1.0, 0.0}, 1);
  const double x[1] = {0.2}, pm[1] = {0.0}, pp[1] = {2.0};
  CHECK(lax_friedrichs(h, 0.0, x, 0.0, pm, pp, 1.0) == 0.0);
  const auto z = hamiltonians::zero();
  CHECK(lax_friedrichs(z, 0.0, x, 0.0, pm, pp, 1.0) == -1.0);
  CHECK(lax_friedrichs(z, 0.0, x, 0.0, pm, pp, 3.0) == -3.0);
}

TEST_CASE("lax-friedrichs with theta = |b| is upwind") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (double b : {1.5, -0.75}) {
    const auto h = hamiltonians::transport_constant({b, 0.0}, 1);
    for (int k = 0; k < 50; ++k) {
      const double x[1] = {0.5}, pm[1] = {u(rng)}, pp[1] = {u(rng)};
      const double upwind = b > 0 ? b * pm[0] : b * pp[0];
      CHECK(lax_friedrichs(h, 0.0, x, 0.0, pm, pp, std::fabs(b)) == doctest::Approx(upwind).epsilon(1e-14));
    }
  }
}

TEST_CASE("lax-friedrichs is monotone in the one-sided slopes") {
  // Nonincreasing in p+ and nondecreasing in p- once theta >= lip_p_bound.
  const auto h = hamiltonians::eikonal([](std::span<const double>) { return 2.0; }, 2.0, 0.0, 0.0);
  const double x[1] = {0.1};
  for (double pm = -3; pm <= 3; pm += 0.5)
    for (double pp = -3; pp <= 3; pp += 0.5) {
      const double a[1] = {pm}, b[1] = {pp}, a2[1] = {pm + 0.1}, b2[1] = {pp + 0.1};
      const double base = lax_friedrichs(h, 0, x, 0, a, b, 2.0);
      CHECK(lax_friedrichs(h, 0, x, 0, a2, b, 2.0) >= base - 1e-15);
      CHECK(lax_friedrichs(h, 0, x, 0, a, b2, 2.0) <= base + 1e-15);
    }
}

TEST_CASE("builtin structure constants") {
  const TorusGrid g(1, 64);
  const auto s = hamiltonians::transport_sinusoidal(1.0, 0.5, 1, g, 1.0);
  CHECK(s.lip_p_bound == doctest::Approx(1.5).epsilon(1e-3));
  CHECK(s.lip_xp_const_L2 == doctest::Approx(0.5 * 2 * kPi));
  CHECK(s.lip_x_const_L1 == 0.0);
  CHECK(s.kind == HamiltonianKind::transport);
  CHECK_FALSE(s.constant_velocity.has_value());

  const auto c = hamiltonians::transport_constant({-2.0, 0.5}, 2);
  CHECK(c.lip_p_bound == 2.0);
  REQUIRE(c.constant_velocity.has_value());
  CHECK((*c.constant_velocity)[0] == -2.0);
  const double x[2] = {0.3, 0.4}, p[2] = {1.0, 2.0};
  CHECK(c(0.0, x, 0.0, p) == -2.0 + 1.0);

  const auto k = hamiltonians::constant(-1.0);
  CHECK(k.kind == HamiltonianKind::constant);
  CHECK(k.constant_value == -1.0);
  CHECK(k(0.0, x, 5.0, p) == -1.0);
}

TEST_CASE("validate rejects malformed specs") {
  HamiltonianSpec h;
  CHECK(code_of([&] { h.validate(); }) == ErrorCode::domain);
  h = hamiltonians::zero();
  CHECK_NOTHROW(h.validate());
  h.lip_p_bound = -1.0;
  CHECK(code_of([&] { h.validate(); }) == ErrorCode::domain);
  h = hamiltonians::zero();
  h.lip_xp_const_L2 = std::nan("");
  CHECK(code_of([&] { h.validate(); }) == ErrorCode::domain);
}

TEST_CASE("shifted and scaled") {
  const auto t = hamiltonians::transport_constant({2.0, 0.0}, 1);
  const double x[1] = {0.25}, p[1] = {1.5};
  const auto s = t.shifted(0.125);
  CHECK(s(0.0, x, 0.0, p) == 3.0 + 0.125);
  CHECK(s.lip_p_bound == t.lip_p_bound);
  const auto k = t.scaled(-2.0);
  CHECK(k(0.0, x, 0.0, p) == -6.0);
  CHECK(k.lip_p_bound == 4.0);
  const auto c = hamiltonians::zero().shifted(0.5);
  CHECK(c.kind == HamiltonianKind::constant);
  CHECK(c.constant_value == 0.5);
}

TEST_CASE("assumption check accepts true constants") {
  const TorusGrid g(1, 64);
  const auto s = hamiltonians::transport_sinusoidal(1.0, 0.5, 1, g, 1.0);
  const auto rep = check_assumptions(s, 4096, 1);
  CHECK(rep.samples > 0);
  CHECK(rep.passed());

  const auto e = hamiltonians::eikonal([](std::span<const double> x) { return 1.0 + 0.5 * std::sin(2 * kPi * x[0]); },
                                       1.5, kPi, 0.25);
  SampleBox box2;
  box2.dim = 1;
  CHECK(check_assumptions(e, 4096, 2, box2).passed());
  CHECK(check_assumptions(hamiltonians::transport_constant({1.0, -1.0}, 2), 2048, 3, SampleBox{1.0, 10.0, 10.0, 2})
            .passed());
}

TEST_CASE("assumption check flags violated constants") {
  HamiltonianSpec dec = hamiltonians::zero();
  dec.eval = [](double, std::span<const double>, double r, std::span<const double>) { return -r; };
  dec.lip_r_bound = 1.0;
  const auto r1 = check_assumptions(dec, 1024, 5);
  CHECK_FALSE(r1.monotone_r_ok());
  CHECK(r1.monotone_r_margin > 1.0);
  CHECK_FALSE(r1.passed());

  HamiltonianSpec quad = hamiltonians::zero();
  quad.eval = [](double, std::span<const double>, double, std::span<const double> p) { return p[0] * p[0]; };
  quad.lip_p_bound = 1.0;
  CHECK(check_assumptions(quad, 1024, 6, SampleBox{1.0, 1.0, 0.25, 1}).lipschitz_p_ok());
  const auto r2 = check_assumptions(quad, 1024, 6, SampleBox{1.0, 1.0, 10.0, 1});
  CHECK_FALSE(r2.lipschitz_p_ok());

  const TorusGrid g(1, 64);
  auto s = hamiltonians::transport_sinusoidal(1.0, 0.5, 1, g, 1.0);
  s.lip_xp_const_L2 = 0.1;
  CHECK_FALSE(check_assumptions(s, 4096, 7).lipschitz_x_ok());
}

TEST_CASE("assumption check is deterministic in the seed") {
  const TorusGrid g(1, 32);
  const auto s = hamiltonians::transport_sinusoidal(0.5, 1.0, 2, g, 1.0);
  const auto a = check_assumptions(s, 500, 42), b = check_assumptions(s, 500, 42);
  CHECK(a.lipschitz_x_margin == b.lipschitz_x_margin);
  CHECK(a.lipschitz_p_margin == b.lipschitz_p_margin);
}
