#include "fhj/oracles.hpp"

#include "fhj/specialfun.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fhj::oracles {
namespace {

constexpr double kTailTol = 1e-12;

double central_derivative(const TimeFunction& f, double s) {
  const double h = 1e-3 * std::min(s, 1.0);
  return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12 * h);
}

template <class Fn>
void sample_sup(const GridFunction& u0, double horizon, Fn&& visit) {
  const TorusGrid& g = u0.grid();
  const auto d = static_cast<std::size_t>(g.dim());
  constexpr int kTimes = 17;
  for (int s = 0; s < kTimes; ++s) {
    const double t = horizon * s / (kTimes - 1);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto x = g.point(k);
      visit(t, std::span<const double>(x.data(), d));
    }
  }
}

}  // namespace

fracops::IntegralValue caputo_brute_estimate(const TimeFunction& f, double t,
                                             FractionalOrder alpha, int panels) {
  if (!(t > 0.0)) throw Error(ErrorCode::domain, "caputo_brute needs t > 0");
  if (alpha.is_classical()) return {central_derivative(f, t), 0.0};
  const double a = alpha.value();
  const double p = 1.0 / (1.0 - a);
  const auto levels = static_cast<std::size_t>(
      std::clamp(std::ceil(std::log2(std::max(panels, 2))), 4.0, 20.0));
  boost::math::quadrature::tanh_sinh<double> ts(levels);
  auto integrand = [&](double sigma, double sigma_c) {
    // 1 - sigma^p without cancellation near sigma = 1.
    const double frac = sigma > 0.5 ? -std::expm1(p * std::log1p(-sigma_c)) : 1.0 - std::pow(sigma, p);
    const double s = t * frac;
    if (!(s > 0.0)) return 0.0;
    return central_derivative(f, s);
  };
  double err = 0.0;
  const double sum = ts.integrate(integrand, 0.0, 1.0, 1e-12, &err);
  const double scale = std::pow(t, 1.0 - a) * specialfun::rgamma(2.0 - a);
  return {scale * sum, scale * err};
}

double caputo_brute(const TimeFunction& f, double t, FractionalOrder alpha, int panels) {
  return caputo_brute_estimate(f, t, alpha, panels).value;
}

double relaxation_ode(double c0, FractionalOrder alpha, double t) {
  if (t < 0.0) throw Error(ErrorCode::domain, "relaxation_ode needs t >= 0");
  if (t == 0.0) return c0;
  return c0 * specialfun::mittag_leffler(alpha, -std::pow(t, alpha.value()));
}

double exact_transport(const Profile& u0, FractionalOrder alpha, double c, double t, double x) {
  if (t < 0.0) throw Error(ErrorCode::domain, "exact_transport needs t >= 0");
  if (t == 0.0) return u0(x);
  const double shift = c * std::pow(t, alpha.value());
  if (alpha.is_classical()) return u0(x - shift);
  const double z_max = specialfun::wright_cutoff(alpha, 0, kTailTol);
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto integrand = [&](double z) { return specialfun::wright(alpha, -z) * u0(x - shift * z); };
  // Panels no longer than a quarter period of u0's argument at unit period.
  const double width = std::min(1.0, 0.25 / std::max(std::fabs(shift), 1e-300));
  double sum = 0.0;
  for (double lo = 0.0; lo < z_max; lo += width) {
    const double hi = std::min(z_max, lo + width);
    sum += GK::integrate(integrand, lo, hi, 8, 1e-11);
  }
  return sum;
}

TransportOracle::TransportOracle(FractionalOrder alpha, double c, double panel_width)
    : alpha_(alpha), c_(c) {
  if (!(panel_width > 0.0)) throw Error(ErrorCode::domain, "panel width must be > 0");
  if (alpha.is_classical()) {
    nodes_ = {1.0};
    weights_ = {1.0};
    z_max_ = 1.0;
    mass_ = 1.0;
    return;
  }
  z_max_ = specialfun::wright_cutoff(alpha, 0, kTailTol);
  using GL = boost::math::quadrature::gauss<double, 16>;
  const auto& xs = GL::abscissa();
  const auto& ws = GL::weights();
  const auto panels = static_cast<std::size_t>(std::ceil(z_max_ / panel_width));
  const double width = z_max_ / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k) {
    const double mid = (static_cast<double>(k) + 0.5) * width;
    const double half = 0.5 * width;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double z = mid + sign * half * xs[i];
        nodes_.push_back(z);
        weights_.push_back(half * ws[i] * specialfun::wright(alpha, -z));
      }
    }
  }
  double m = 0.0;
  for (double w : weights_) m += w;
  mass_ = m;
}

double TransportOracle::operator()(const Profile& u0, double t, double x) const {
  if (t < 0.0) throw Error(ErrorCode::domain, "transport oracle needs t >= 0");
  if (t == 0.0) return u0(x);
  const double shift = c_ * std::pow(t, alpha_.value());
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) sum += weights_[k] * u0(x - shift * nodes_[k]);
  return sum;
}

GridFunction BarrierPair::lower(double t) const {
  GridFunction out = u0_;
  const double shift = M_ * std::pow(t, alpha_.value());
  for (auto& v : out.values()) v -= shift;
  return out;
}

GridFunction BarrierPair::upper(double t) const {
  GridFunction out = u0_;
  const double shift = M_ * std::pow(t, alpha_.value());
  for (auto& v : out.values()) v += shift;
  return out;
}

double BarrierPair::lower(double t, std::size_t node) const {
  return u0_[node] - M_ * std::pow(t, alpha_.value());
}

double BarrierPair::upper(double t, std::size_t node) const {
  return u0_[node] + M_ * std::pow(t, alpha_.value());
}

BarrierPair barrier_pair(const GridFunction& u0, FractionalOrder alpha,
                         const HamiltonianSpec& hamiltonian, double lip_u0, double horizon) {
  if (!(lip_u0 >= 0.0)) throw Error(ErrorCode::domain, "lip_u0 must be >= 0");
  const double r = u0.max_abs();
  const int dim = u0.grid().dim();
  std::vector<std::array<double, 2>> ball;
  if (dim == 1) {
    constexpr int kSteps = 64;
    for (int k = 0; k <= kSteps; ++k) ball.push_back({lip_u0 * (2.0 * k / kSteps - 1.0), 0.0});
  } else {
    constexpr int kRadii = 16, kAngles = 64;
    ball.push_back({0.0, 0.0});
    for (int i = 1; i <= kRadii; ++i) {
      const double rad = lip_u0 * i / kRadii;
      for (int j = 0; j < kAngles; ++j) {
        const double th = 2.0 * std::numbers::pi * j / kAngles;
        ball.push_back({rad * std::cos(th), rad * std::sin(th)});
      }
    }
  }
  double sup = 0.0;
  sample_sup(u0, horizon, [&](double t, std::span<const double> x) {
    for (const auto& p : ball)
      sup = std::max(sup, std::fabs(hamiltonian(t, x, r, std::span<const double>(p.data(), x.size()))));
  });
  return BarrierPair(u0, alpha, sup * specialfun::rgamma(1.0 + alpha.value()));
}

double uniform_bound_constant(const GridFunction& u0, FractionalOrder alpha,
                              const HamiltonianSpec& hamiltonian, double horizon) {
  const double r = u0.max_abs();
  const std::array<double, 2> zero{0.0, 0.0};
  double sup = 0.0;
  sample_sup(u0, horizon, [&](double t, std::span<const double> x) {
    sup = std::max(sup, std::fabs(hamiltonian(t, x, r, std::span<const double>(zero.data(), x.size()))));
  });
  return sup * specialfun::rgamma(1.0 + alpha.value());
}

double evaluate(const OracleProblem& problem, FractionalOrder alpha, const Profile& u0, double t,
                double x) {
  struct Visitor {
    FractionalOrder alpha;
    const Profile& u0;
    double t, x;
    double operator()(const TransportConstSpeed& p) const {
      return exact_transport(u0, alpha, p.c, t, x);
    }
    double operator()(const RelaxationOde& p) const { return relaxation_ode(p.c0, alpha, t); }
    double operator()(const PowerBarrier& p) const {
      if (!(p.M > 0.0)) throw Error(ErrorCode::domain, "barrier constant M must be > 0");
      return u0(x) + p.sign * p.M * std::pow(t, alpha.value());
    }
    double operator()(const CustomCallable& p) const { return p.fn(t, x); }
  };
  return std::visit(Visitor{alpha, u0, t, x}, problem);
}

}  // namespace fhj::oracles
