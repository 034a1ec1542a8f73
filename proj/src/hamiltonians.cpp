#include "fhj/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace fhj {

void HamiltonianSpec::validate() const {
  if (!eval) throw Error(ErrorCode::domain, "Hamiltonian has no evaluation function");
  const double consts[] = {lip_x_const_L1, lip_xp_const_L2, lip_p_bound, lip_r_bound};
  for (double c : consts)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw Error(ErrorCode::domain, "Hamiltonian structure constants must be finite and >= 0");
}

HamiltonianSpec HamiltonianSpec::shifted(double eps) const {
  HamiltonianSpec out = *this;
  out.eval = [inner = eval, eps](double t, std::span<const double> x, double r,
                                 std::span<const double> p) { return inner(t, x, r, p) + eps; };
  if (kind == HamiltonianKind::zero || kind == HamiltonianKind::constant) {
    out.kind = HamiltonianKind::constant;
    out.constant_value = constant_value + eps;
  } else {
    out.kind = HamiltonianKind::custom;
    out.constant_velocity.reset();
  }
  out.name = name + "+eps";
  return out;
}

HamiltonianSpec HamiltonianSpec::scaled(double k) const {
  HamiltonianSpec out = *this;
  out.eval = [inner = eval, k](double t, std::span<const double> x, double r,
                               std::span<const double> p) { return k * inner(t, x, r, p); };
  const double a = std::fabs(k);
  out.lip_x_const_L1 *= a;
  out.lip_xp_const_L2 *= a;
  out.lip_p_bound *= a;
  out.lip_r_bound *= a;
  out.monotone_in_r = k >= 0.0 ? monotone_in_r : false;
  out.constant_value *= k;
  if (constant_velocity) out.constant_velocity = {(*constant_velocity)[0] * k, (*constant_velocity)[1] * k};
  out.name = name + "*k";
  return out;
}

namespace hamiltonians {

HamiltonianSpec zero() {
  HamiltonianSpec h;
  h.eval = [](double, std::span<const double>, double, std::span<const double>) { return 0.0; };
  h.kind = HamiltonianKind::zero;
  h.name = "zero";
  return h;
}

HamiltonianSpec constant(double c) {
  HamiltonianSpec h;
  h.eval = [c](double, std::span<const double>, double, std::span<const double>) { return c; };
  h.kind = HamiltonianKind::constant;
  h.constant_value = c;
  h.name = "constant";
  return h;
}

HamiltonianSpec transport(VelocityField b, double lipschitz_b, const TorusGrid& grid,
                          double horizon) {
  double sup_b = 0.0;
  constexpr int kTimeSamples = 17;
  for (int s = 0; s < kTimeSamples; ++s) {
    const double t = horizon * s / (kTimeSamples - 1);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto x = grid.point(k);
      const auto v = b(t, std::span<const double>(x.data(), static_cast<std::size_t>(grid.dim())));
      for (int d = 0; d < grid.dim(); ++d) sup_b = std::max(sup_b, std::fabs(v[d]));
    }
  }
  HamiltonianSpec h;
  h.eval = [b = std::move(b)](double t, std::span<const double> x, double,
                              std::span<const double> p) {
    const auto v = b(t, x);
    double s = 0.0;
    for (std::size_t d = 0; d < p.size(); ++d) s += v[d] * p[d];
    return s;
  };
  h.lip_x_const_L1 = 0.0;
  h.lip_xp_const_L2 = lipschitz_b;
  h.lip_p_bound = sup_b;
  h.kind = HamiltonianKind::transport;
  h.name = "transport";
  return h;
}

HamiltonianSpec transport_constant(std::array<double, 2> b, int dim) {
  if (dim == 1) b[1] = 0.0;
  HamiltonianSpec h;
  h.eval = [b](double, std::span<const double>, double, std::span<const double> p) {
    double s = 0.0;
    for (std::size_t d = 0; d < p.size(); ++d) s += b[d] * p[d];
    return s;
  };
  h.lip_p_bound = std::max(std::fabs(b[0]), std::fabs(b[1]));
  h.kind = HamiltonianKind::transport;
  h.constant_velocity = b;
  h.name = "transport";
  return h;
}

HamiltonianSpec transport_sinusoidal(double mean, double amplitude, int wavenumber,
                                     const TorusGrid& grid, double horizon) {
  const double w = 2.0 * std::numbers::pi * wavenumber;
  VelocityField b = [=](double, std::span<const double> x) -> std::array<double, 2> {
    return {mean + amplitude * std::sin(w * x[0]), 0.0};
  };
  return transport(std::move(b), std::fabs(amplitude) * std::fabs(w), grid, horizon);
}

HamiltonianSpec eikonal(std::function<double(std::span<const double>)> speed, double c_sup,
                        double c_lip, double lambda) {
  HamiltonianSpec h;
  h.eval = [speed = std::move(speed), lambda](double, std::span<const double> x, double r,
                                              std::span<const double> p) {
    double n2 = 0.0;
    for (double v : p) n2 += v * v;
    return speed(x) * std::sqrt(n2) + lambda * r;
  };
  h.lip_xp_const_L2 = c_lip;
  h.lip_p_bound = c_sup;
  h.lip_r_bound = std::fabs(lambda);
  h.monotone_in_r = lambda >= 0.0;
  h.kind = HamiltonianKind::eikonal;
  h.name = "eikonal";
  return h;
}

}  // namespace hamiltonians

double lax_friedrichs(const HamiltonianSpec& spec, double t, std::span<const double> x, double r,
                      std::span<const double> p_minus, std::span<const double> p_plus,
                      double theta) {
  std::array<double, 2> mid{};
  double jump = 0.0;
  for (std::size_t k = 0; k < p_minus.size(); ++k) {
    mid[k] = 0.5 * (p_minus[k] + p_plus[k]);
    jump += p_plus[k] - p_minus[k];
  }
  return spec(t, x, r, std::span<const double>(mid.data(), p_minus.size())) - 0.5 * theta * jump;
}

AssumptionReport check_assumptions(const HamiltonianSpec& spec, std::size_t sample_budget,
                                   std::uint64_t seed, const SampleBox& box) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sym = [&](double m) { return m * (2.0 * unit(rng) - 1.0); };

  AssumptionReport rep;
  rep.lipschitz_x_margin = -std::numeric_limits<double>::infinity();
  rep.monotone_r_margin = -std::numeric_limits<double>::infinity();
  rep.lipschitz_r_margin = -std::numeric_limits<double>::infinity();
  rep.lipschitz_p_margin = -std::numeric_limits<double>::infinity();
  const auto d = static_cast<std::size_t>(box.dim);

  for (std::size_t s = 0; s < sample_budget; ++s) {
    std::array<double, 2> x{unit(rng), unit(rng)}, y{unit(rng), unit(rng)};
    std::array<double, 2> p{sym(box.p_max), sym(box.p_max)};
    const double t = box.horizon * unit(rng);
    double r1 = sym(box.r_max), r2 = sym(box.r_max);
    if (r1 > r2) std::swap(r1, r2);
    const std::span<const double> xs(x.data(), d), ys(y.data(), d), ps(p.data(), d);

    double dist2 = 0.0, pnorm2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      dist2 += (x[k] - y[k]) * (x[k] - y[k]);
      pnorm2 += p[k] * p[k];
    }
    const double dist = std::sqrt(dist2);
    const double hx = spec(t, xs, r1, ps);
    const double hy = spec(t, ys, r1, ps);
    rep.lipschitz_x_margin =
        std::max(rep.lipschitz_x_margin, std::fabs(hx - hy) - spec.lip_x_const_L1 * dist -
                                             spec.lip_xp_const_L2 * dist * std::sqrt(pnorm2));

    const double hr2 = spec(t, xs, r2, ps);
    rep.monotone_r_margin = std::max(rep.monotone_r_margin, hx - hr2);
    rep.lipschitz_r_margin =
        std::max(rep.lipschitz_r_margin, std::fabs(hr2 - hx) - spec.lip_r_bound * (r2 - r1));

    for (std::size_t k = 0; k < d; ++k) {
      auto q = p;
      const double delta = sym(box.p_max);
      if (delta == 0.0) continue;
      q[k] += delta;
      const double hq = spec(t, xs, r1, std::span<const double>(q.data(), d));
      rep.lipschitz_p_margin =
          std::max(rep.lipschitz_p_margin, std::fabs(hq - hx) / std::fabs(delta) - spec.lip_p_bound);
    }
    ++rep.samples;
  }
  return rep;
}

}  // namespace fhj
