#pragma once

// Caputo derivative operators on sampled and callable time signals: the L1
// discretization used by the solver, and quadrature of the integrated-by-parts
// form K_0 with its split J_r + K_r.

#include "fhj/fractional_order.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace fhj {

/// Uniform grid t_n = n * dt on [0, T], n = 0..N.
class TimeGrid {
public:
  TimeGrid(double horizon, std::size_t steps);

  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  double dt() const noexcept { return dt_; }
  double node(std::size_t n) const noexcept { return static_cast<double>(n) * dt_; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
  double horizon_;
  std::size_t steps_;
  double dt_;
};

using TimeFunction = std::function<double(double)>;

}  // namespace fhj

namespace fhj::fracops {

/// b_j = (j+1)^{1-alpha} - j^{1-alpha}, j = 0..n-1.
class L1Weights {
public:
  L1Weights(FractionalOrder alpha, std::size_t n);

  FractionalOrder alpha() const noexcept { return alpha_; }
  std::span<const double> values() const noexcept { return b_; }
  double operator[](std::size_t j) const { return b_[j]; }
  std::size_t size() const noexcept { return b_.size(); }

private:
  FractionalOrder alpha_;
  std::vector<double> b_;
};

L1Weights l1_weights(FractionalOrder alpha, std::size_t n);

/// 1 / (Gamma(2-alpha) dt^alpha): coefficient of the newest value in the L1 sum.
double l1_diag_coeff(FractionalOrder alpha, double dt);

/// L1 approximation of the Caputo derivative at node at_node (1..N) of a signal
/// with N+1 samples on grid.
double caputo_l1(std::span<const double> signal, const TimeGrid& grid, FractionalOrder alpha,
                 std::size_t at_node);

struct HistorySplit {
  double history_sum = 0.0;
  double diag_coeff = 0.0;
};

/// Splits caputo_l1 at at_node into diag_coeff * f_n + history_sum, where
/// history_sum depends only on prefix = (f_0, ..., f_{n-1}).
HistorySplit caputo_l1_history(std::span<const double> prefix, const TimeGrid& grid,
                               FractionalOrder alpha, std::size_t at_node);

/// Lagged L1 convolution for many signals marched in lockstep (one per
/// spatial node). Stores the increments u^m - u^{m-1} and evaluates
/// sum_{j=1}^{m-1} b_j (u^{m-j} - u^{m-j-1}) for the next node m with the
/// SIMD kernels.
class L1History {
public:
  L1History(FractionalOrder alpha, const TimeGrid& grid, std::size_t width);

  std::size_t width() const noexcept { return width_; }
  /// Number of stored increments; the next node is size() + 1.
  std::size_t size() const noexcept { return count_; }
  double diag_coeff() const noexcept { return diag_; }
  /// Gamma(2-alpha) dt^alpha = 1 / diag_coeff.
  double step_scale() const noexcept { return scale_; }
  const L1Weights& weights() const noexcept { return weights_; }

  void push(std::span<const double> increment);
  void lagged_sum(std::span<double> out) const;

private:
  FractionalOrder alpha_;
  std::size_t width_;
  std::size_t count_ = 0;
  double diag_;
  double scale_;
  L1Weights weights_;
  std::vector<double> increments_;  // row m-1 holds u^m - u^{m-1}
  mutable std::vector<double> reversed_;
};

/// Quadrature controls for K_0, J_r and K_r.
struct QuadratureConfig {
  double split_r = 1e-3;          // inner radius as a fraction of t
  int panels = 16;                // log-spaced panels on [r, t]
  int tail_refinement = 8;        // max bisection depth per panel
  double tolerance = 1e-11;

  void validate() const;
};

struct IntegralValue {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// K_0[f](t) = (f(t)-f(0))/(t^alpha Gamma(1-alpha))
///           + alpha/Gamma(1-alpha) int_0^t (f(t)-f(t-tau)) tau^{-alpha-1} dtau.
///
/// On [0, split_r t] the increment f(t)-f(t-tau) is replaced by its quadratic
/// model through tau = r/2, r and integrated exactly; that contribution must
/// respect |.| <= alpha/Gamma(1-alpha) L r^{1-alpha}/(1-alpha) for the slope
/// bound L, otherwise ErrorCode::divergence. A large error_estimate means the
/// integral may not exist at t. alpha = 1 returns f'(t).
IntegralValue k0_eval(const TimeFunction& f, double t, FractionalOrder alpha,
                      const QuadratureConfig& quad = {},
                      double near_origin_slope_bound = std::numeric_limits<double>::infinity());

/// J_r[f](t) = alpha/Gamma(1-alpha) int_0^r (f(t)-f(t-tau)) tau^{-alpha-1} dtau, 0 < r < t.
IntegralValue jr_eval(const TimeFunction& f, double t, double r, FractionalOrder alpha,
                      const QuadratureConfig& quad = {},
                      double near_origin_slope_bound = std::numeric_limits<double>::infinity());

/// K_r[f](t) = (f(t)-f(0))/(t^alpha Gamma(1-alpha)) + alpha/Gamma(1-alpha) int_r^t ..., 0 < r < t.
IntegralValue kr_eval(const TimeFunction& f, double t, double r, FractionalOrder alpha,
                      const QuadratureConfig& quad = {});

/// Piecewise-linear interpolant of a sampled signal, for the callable operators.
TimeFunction interpolate(std::span<const double> signal, const TimeGrid& grid);

}  // namespace fhj::fracops
