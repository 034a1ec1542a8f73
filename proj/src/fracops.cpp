#include "fhj/fracops.hpp"

#include "fhj/kernels.hpp"
#include "fhj/specialfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace fhj {

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw Error(ErrorCode::domain, "time horizon T must be > 0");
  if (steps < 1) throw Error(ErrorCode::domain, "number of time steps N must be >= 1");
  dt_ = horizon / static_cast<double>(steps);
}

}  // namespace fhj

namespace fhj::fracops {
namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::domain, "fractional operators are defined for t > 0 only");
}

double kernel_coeff(FractionalOrder alpha) {
  return alpha.value() * specialfun::rgamma(1.0 - alpha.value());
}

double boundary_term(const TimeFunction& f, double t, FractionalOrder alpha) {
  const double a = alpha.value();
  return (f(t) - f(0.0)) * specialfun::rgamma(1.0 - a) / std::pow(t, a);
}

// alpha/Gamma(1-alpha) int_lo^hi (f(t) - f(t-tau)) tau^{-alpha-1} dtau.
// Below t/2 the integral runs in log tau over log-spaced panels; above it in
// s = t - tau with tanh-sinh, which absorbs a singular f' at s = 0.
IntegralValue outer_integral(const TimeFunction& f, double t, double lo, double hi,
                             FractionalOrder alpha, const QuadratureConfig& quad) {
  IntegralValue out;
  if (!(hi > lo)) return out;
  const double a = alpha.value();
  const double ft = f(t);
  const double mid = 0.5 * t;
  double sum = 0.0;
  double err = 0.0;

  if (lo < mid) {
    auto integrand = [&](double v) {
      const double tau = std::exp(v);
      return (ft - f(t - tau)) * std::exp(-a * v);
    };
    const double vlo = std::log(lo);
    const double vhi = std::log(std::min(hi, mid));
    const double width = (vhi - vlo) / quad.panels;
    for (int k = 0; k < quad.panels; ++k) {
      const double v0 = vlo + k * width;
      const double v1 = (k + 1 == quad.panels) ? vhi : vlo + (k + 1) * width;
      double e = 0.0;
      sum += GK::integrate(integrand, v0, v1, static_cast<unsigned>(quad.tail_refinement),
                           quad.tolerance, &e);
      err += e;
    }
  }
  if (hi > mid) {
    auto integrand = [&](double s) { return (ft - f(s)) * std::pow(t - s, -a - 1.0); };
    const auto levels = static_cast<std::size_t>(std::min(quad.tail_refinement, 15));
    boost::math::quadrature::tanh_sinh<double> ts(levels);
    double e = 0.0;
    sum += ts.integrate(integrand, t - hi, t - std::max(lo, mid), quad.tolerance, &e);
    err += e;
  }
  const double c = kernel_coeff(alpha);
  out.value = c * sum;
  out.error_estimate = std::fabs(c) * err;
  return out;
}

// Quadratic model D(tau) ~ s1 tau + s2 tau^2 of D(tau) = f(t) - f(t-tau) on
// [0, radius], integrated exactly against alpha/Gamma(1-alpha) tau^{-alpha-1}.
IntegralValue inner_model(const TimeFunction& f, double t, double radius, FractionalOrder alpha,
                          double slope_bound) {
  const double a = alpha.value();
  const double ft = f(t);
  const double d1 = ft - f(t - radius);
  const double dh = ft - f(t - 0.5 * radius);
  const double dq = ft - f(t - 0.25 * radius);
  const double s2 = 2.0 * (d1 - 2.0 * dh) / (radius * radius);
  const double s1 = (4.0 * dh - d1) / radius;
  const double c = kernel_coeff(alpha);

  IntegralValue out;
  out.value = c * (s1 * std::pow(radius, 1.0 - a) / (1.0 - a) +
                   s2 * std::pow(radius, 2.0 - a) / (2.0 - a));
  const double residual = dq - (0.25 * s1 * radius + s2 * radius * radius / 16.0);
  const double s3 = residual * 64.0 / (3.0 * radius * radius * radius);
  out.error_estimate = std::fabs(c * s3) * std::pow(radius, 3.0 - a) / (3.0 - a);

  const double limit = c * slope_bound * std::pow(radius, 1.0 - a) / (1.0 - a);
  if (std::fabs(out.value) > limit * (1.0 + 1e-9))
    throw Error(ErrorCode::divergence,
                "small-tau contribution " + std::to_string(out.value) + " exceeds its slope bound " +
                    std::to_string(limit) + " at t = " + std::to_string(t));
  return out;
}

// Backward-difference derivative with two Richardson levels (alpha = 1).
IntegralValue classical_derivative(const TimeFunction& f, double t, double h) {
  const double ft = f(t);
  auto d = [&](double step) { return ft - f(t - step); };
  auto d1 = [&](double step) { return (4.0 * d(0.5 * step) - d(step)) / step; };
  const double coarse = d1(h);
  const double fine = d1(0.5 * h);
  IntegralValue out;
  out.value = (4.0 * fine - coarse) / 3.0;
  out.error_estimate = std::fabs(out.value - fine);
  return out;
}

}  // namespace

L1Weights::L1Weights(FractionalOrder alpha, std::size_t n) : alpha_(alpha), b_(n) {
  if (n < 1) throw Error(ErrorCode::domain, "l1_weights: n must be >= 1");
  const double e = 1.0 - alpha.value();
  if (n > 0) b_[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    const double jd = static_cast<double>(j);
    // (j+1)^e - j^e without cancellation
    b_[j] = std::pow(jd, e) * std::expm1(e * std::log1p(1.0 / jd));
  }
}

L1Weights l1_weights(FractionalOrder alpha, std::size_t n) { return L1Weights(alpha, n); }

double l1_diag_coeff(FractionalOrder alpha, double dt) {
  const double a = alpha.value();
  return 1.0 / (specialfun::gamma(2.0 - a) * std::pow(dt, a));
}

double caputo_l1(std::span<const double> signal, const TimeGrid& grid, FractionalOrder alpha,
                 std::size_t at_node) {
  if (signal.size() != grid.steps() + 1)
    throw Error(ErrorCode::domain, "caputo_l1: signal length does not match its time grid");
  if (at_node < 1 || at_node > grid.steps())
    throw Error(ErrorCode::node_out_of_range,
                "caputo_l1: node " + std::to_string(at_node) + " outside 1.." +
                    std::to_string(grid.steps()));
  const L1Weights b(alpha, at_node);
  double sum = 0.0;
  for (std::size_t j = 0; j < at_node; ++j)
    sum += b[j] * (signal[at_node - j] - signal[at_node - j - 1]);
  return sum * l1_diag_coeff(alpha, grid.dt());
}

HistorySplit caputo_l1_history(std::span<const double> prefix, const TimeGrid& grid,
                               FractionalOrder alpha, std::size_t at_node) {
  if (at_node < 1 || at_node > grid.steps())
    throw Error(ErrorCode::node_out_of_range,
                "caputo_l1_history: node " + std::to_string(at_node) + " outside 1.." +
                    std::to_string(grid.steps()));
  if (prefix.size() != at_node)
    throw Error(ErrorCode::domain, "caputo_l1_history: prefix must hold nodes 0..at_node-1");
  L1History hist(alpha, grid, 1);
  for (std::size_t m = 1; m < at_node; ++m) {
    const double inc = prefix[m] - prefix[m - 1];
    hist.push(std::span<const double>(&inc, 1));
  }
  double lagged = 0.0;
  hist.lagged_sum(std::span<double>(&lagged, 1));
  HistorySplit out;
  out.diag_coeff = hist.diag_coeff();
  out.history_sum = out.diag_coeff * (lagged - prefix[at_node - 1]);
  return out;
}

L1History::L1History(FractionalOrder alpha, const TimeGrid& grid, std::size_t width)
    : alpha_(alpha),
      width_(width),
      diag_(l1_diag_coeff(alpha, grid.dt())),
      scale_(specialfun::gamma(2.0 - alpha.value()) * std::pow(grid.dt(), alpha.value())),
      weights_(alpha, grid.steps()) {
  increments_.reserve(grid.steps() * width);
  reversed_.reserve(grid.steps());
}

void L1History::push(std::span<const double> increment) {
  if (increment.size() != width_)
    throw Error(ErrorCode::domain, "L1History::push: increment width mismatch");
  if (count_ + 1 > weights_.size())
    throw Error(ErrorCode::node_out_of_range, "L1History::push: time grid exhausted");
  increments_.insert(increments_.end(), increment.begin(), increment.end());
  ++count_;
}

void L1History::lagged_sum(std::span<double> out) const {
  if (out.size() != width_) throw Error(ErrorCode::domain, "L1History::lagged_sum: width mismatch");
  // Next node m = count_ + 1 pairs row r (increment r+1) with b_{m-1-r}; the
  // newest row (r = count_-1) carries b_1 ... the oldest row carries b_{m-1}.
  // Row count_ would carry b_0 and is the unknown, so rows 0..count_-1 only.
  const std::size_t rows = count_;
  reversed_.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) reversed_[r] = weights_[rows - r];
  kernels::weighted_row_sum(out, reversed_,
                            std::span<const double>(increments_.data(), rows * width_));
}

void QuadratureConfig::validate() const {
  if (!(split_r > 0.0 && split_r < 1.0))
    throw Error(ErrorCode::domain, "QuadratureConfig.split_r must lie in (0, 1)");
  if (panels < 8) throw Error(ErrorCode::domain, "QuadratureConfig.panels must be >= 8");
  if (tail_refinement < 1)
    throw Error(ErrorCode::domain, "QuadratureConfig.tail_refinement must be >= 1");
  if (!(tolerance > 0.0)) throw Error(ErrorCode::domain, "QuadratureConfig.tolerance must be > 0");
}

IntegralValue k0_eval(const TimeFunction& f, double t, FractionalOrder alpha,
                      const QuadratureConfig& quad, double near_origin_slope_bound) {
  require_positive_time(t);
  quad.validate();
  const double r0 = quad.split_r * t;
  if (alpha.is_classical()) return classical_derivative(f, t, r0);

  const IntegralValue inner = inner_model(f, t, r0, alpha, near_origin_slope_bound);
  const IntegralValue outer = outer_integral(f, t, r0, t, alpha, quad);
  return {boundary_term(f, t, alpha) + inner.value + outer.value,
          inner.error_estimate + outer.error_estimate};
}

IntegralValue jr_eval(const TimeFunction& f, double t, double r, FractionalOrder alpha,
                      const QuadratureConfig& quad, double near_origin_slope_bound) {
  require_positive_time(t);
  quad.validate();
  if (!(r > 0.0 && r < t)) throw Error(ErrorCode::domain, "jr_eval: need 0 < r < t");
  const double r0 = quad.split_r * t;
  // As alpha -> 1 the whole derivative concentrates at tau -> 0.
  if (alpha.is_classical()) return classical_derivative(f, t, std::min(r, r0));

  if (r <= r0) return inner_model(f, t, r, alpha, near_origin_slope_bound);
  const IntegralValue inner = inner_model(f, t, r0, alpha, near_origin_slope_bound);
  const IntegralValue outer = outer_integral(f, t, r0, r, alpha, quad);
  return {inner.value + outer.value, inner.error_estimate + outer.error_estimate};
}

IntegralValue kr_eval(const TimeFunction& f, double t, double r, FractionalOrder alpha,
                      const QuadratureConfig& quad) {
  require_positive_time(t);
  quad.validate();
  if (!(r > 0.0 && r < t)) throw Error(ErrorCode::domain, "kr_eval: need 0 < r < t");
  if (alpha.is_classical()) return {};
  const IntegralValue outer = outer_integral(f, t, r, t, alpha, quad);
  return {boundary_term(f, t, alpha) + outer.value, outer.error_estimate};
}

TimeFunction interpolate(std::span<const double> signal, const TimeGrid& grid) {
  if (signal.size() != grid.steps() + 1)
    throw Error(ErrorCode::domain, "interpolate: signal length does not match its time grid");
  std::vector<double> values(signal.begin(), signal.end());
  const double dt = grid.dt();
  const std::size_t steps = grid.steps();
  return [values = std::move(values), dt, steps](double t) {
    const double s = std::clamp(t / dt, 0.0, static_cast<double>(steps));
    const std::size_t k = std::min(static_cast<std::size_t>(s), steps - 1);
    const double w = s - static_cast<double>(k);
    return (1.0 - w) * values[k] + w * values[k + 1];
  };
}

}  // namespace fhj::fracops
