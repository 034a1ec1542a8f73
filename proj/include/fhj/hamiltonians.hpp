#pragma once

// Hamiltonians H(t, x, r, p) with their declared structure constants, the
// Lax-Friedrichs numerical Hamiltonian, and a sampling check of the declared
// constants.

#include "fhj/grid.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

namespace fhj {

using HamiltonianFn = std::function<double(double t, std::span<const double> x, double r,
                                           std::span<const double> p)>;
using VelocityField = std::function<std::array<double, 2>(double t, std::span<const double> x)>;

enum class HamiltonianKind { zero, constant, transport, eikonal, custom };

struct HamiltonianSpec {
  HamiltonianFn eval;
  double lip_x_const_L1 = 0.0;   // |H(x)-H(y)| <= L1|x-y| + L2|x-y||p|
  double lip_xp_const_L2 = 0.0;
  double lip_p_bound = 0.0;      // bound on |dH/dp_k| on the working range
  double lip_r_bound = 0.0;      // bound on dH/dr (0 for r-independent H)
  bool monotone_in_r = true;

  HamiltonianKind kind = HamiltonianKind::custom;
  std::string name = "custom";
  // Parameters the exact-solution oracles need; set by the builtins.
  double constant_value = 0.0;                              // kind == constant
  std::optional<std::array<double, 2>> constant_velocity;  // transport with constant b

  double operator()(double t, std::span<const double> x, double r,
                    std::span<const double> p) const {
    return eval(t, x, r, p);
  }

  /// Throws ErrorCode::domain unless eval is set and the constants are >= 0.
  void validate() const;

  /// Same structure constants, H + eps.
  HamiltonianSpec shifted(double eps) const;
  /// Same structure, k * H (constants scaled by |k|).
  HamiltonianSpec scaled(double k) const;
};

namespace hamiltonians {

HamiltonianSpec zero();
/// H = c everywhere.
HamiltonianSpec constant(double c);

/// H = b(t,x) . p. lip_p_bound = sup |b_k| over the grid nodes at 17 times in
/// [0, horizon]; L1 = 0, L2 = lipschitz_b.
HamiltonianSpec transport(VelocityField b, double lipschitz_b, const TorusGrid& grid,
                          double horizon);
/// Transport with constant velocity (only the first `dim` entries are used).
HamiltonianSpec transport_constant(std::array<double, 2> b, int dim);
/// 1D b(x) = mean + amplitude sin(2 pi k x).
HamiltonianSpec transport_sinusoidal(double mean, double amplitude, int wavenumber,
                                     const TorusGrid& grid, double horizon);

/// H = c(x)|p| + lambda r with 0 <= c <= c_sup and Lipschitz constant c_lip.
HamiltonianSpec eikonal(std::function<double(std::span<const double>)> speed, double c_sup,
                        double c_lip, double lambda);

}  // namespace hamiltonians

/// H(t,x,r,(p-+p+)/2) - (theta/2) sum_k (p+_k - p-_k).
double lax_friedrichs(const HamiltonianSpec& spec, double t, std::span<const double> x, double r,
                      std::span<const double> p_minus, std::span<const double> p_plus,
                      double theta);

struct SampleBox {
  double horizon = 1.0;
  double r_max = 10.0;
  double p_max = 10.0;
  int dim = 1;
};

/// Worst violation of each declared property over the samples; positive means violated.
struct AssumptionReport {
  std::size_t samples = 0;
  double lipschitz_x_margin = 0.0;  // |H(x)-H(y)| - L1|x-y| - L2|x-y||p|
  double monotone_r_margin = 0.0;   // H(r1) - H(r2) for r1 < r2
  double lipschitz_r_margin = 0.0;  // |H(r1)-H(r2)| - lip_r |r1-r2|
  double lipschitz_p_margin = 0.0;  // |H(p+d e_k)-H(p)|/|d| - lip_p_bound

  bool lipschitz_x_ok() const { return lipschitz_x_margin <= 1e-9; }
  bool monotone_r_ok() const { return monotone_r_margin <= 1e-12; }
  bool lipschitz_r_ok() const { return lipschitz_r_margin <= 1e-9; }
  bool lipschitz_p_ok() const { return lipschitz_p_margin <= 1e-9; }
  bool passed() const {
    return lipschitz_x_ok() && monotone_r_ok() && lipschitz_r_ok() && lipschitz_p_ok();
  }
};

AssumptionReport check_assumptions(const HamiltonianSpec& spec, std::size_t sample_budget,
                                   std::uint64_t seed, const SampleBox& box = {});

}  // namespace fhj
