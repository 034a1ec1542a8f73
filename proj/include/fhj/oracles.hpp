#pragma once

// Reference solutions and brute-force operators used to validate fracops and
// the solver.

#include "fhj/fracops.hpp"
#include "fhj/grid.hpp"
#include "fhj/hamiltonians.hpp"

#include <functional>
#include <variant>
#include <vector>

namespace fhj::oracles {

/// Periodic initial profile on the 1D torus.
using Profile = std::function<double(double)>;

/// Caputo derivative by direct quadrature of
/// 1/Gamma(1-alpha) int_0^t f'(s) (t-s)^{-alpha} ds
/// after s = t(1 - sigma^{1/(1-alpha)}), which turns the kernel into a
/// constant. f' comes from a 5-point central difference, so f must be
/// evaluatable slightly beyond [0, t]. `panels` sets the tanh-sinh budget
/// (2^levels >= panels).
fracops::IntegralValue caputo_brute_estimate(const TimeFunction& f, double t,
                                             FractionalOrder alpha, int panels = 4096);
double caputo_brute(const TimeFunction& f, double t, FractionalOrder alpha, int panels = 4096);

/// c0 E_alpha(-t^alpha), the solution of D^alpha f + f = 0, f(0) = c0.
double relaxation_ode(double c0, FractionalOrder alpha, double t);

/// u(t,x) = int_0^inf W(-z) u0(x - c t^alpha z) dz, the solution of
/// D^alpha u + c u_x = 0 with u(0) = u0, by adaptive Gauss-Kronrod quadrature
/// on [0, Z_max] (tail below 1e-12 of the mass). alpha = 1 gives u0(x - c t).
double exact_transport(const Profile& u0, FractionalOrder alpha, double c, double t, double x);

/// The same convolution with a fixed composite Gauss-Legendre rule whose
/// nodes and density weights are computed once; meant for evaluating the
/// oracle on whole space-time grids.
class TransportOracle {
public:
  /// panel_width bounds the GL panel length in z; it must resolve u0 along
  /// x - c t^alpha z over the times of interest.
  TransportOracle(FractionalOrder alpha, double c, double panel_width = 0.25);

  double operator()(const Profile& u0, double t, double x) const;

  FractionalOrder alpha() const noexcept { return alpha_; }
  double speed() const noexcept { return c_; }
  double z_max() const noexcept { return z_max_; }
  /// Mass the discrete rule assigns to the density; 1 up to quadrature error.
  double discrete_mass() const noexcept { return mass_; }

private:
  FractionalOrder alpha_;
  double c_;
  double z_max_ = 0.0;
  double mass_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;  // GL weight times W(-z)
};

/// Barriers u0 -+ M t^alpha with M = sup |H(t, x, max|u0|, p)| / Gamma(1+alpha)
/// over the grid nodes, 17 times in [0, horizon] and the p-ball |p| <= lip_u0.
class BarrierPair {
public:
  BarrierPair(GridFunction u0, FractionalOrder alpha, double M)
      : u0_(std::move(u0)), alpha_(alpha), M_(M) {}

  double M() const noexcept { return M_; }
  GridFunction lower(double t) const;
  GridFunction upper(double t) const;
  double lower(double t, std::size_t node) const;
  double upper(double t, std::size_t node) const;

private:
  GridFunction u0_;
  FractionalOrder alpha_;
  double M_;
};

BarrierPair barrier_pair(const GridFunction& u0, FractionalOrder alpha,
                         const HamiltonianSpec& hamiltonian, double lip_u0, double horizon = 1.0);

/// C = sup |H(t, x, max|u0|, 0)| / Gamma(1+alpha), sampled like barrier_pair;
/// the uniform bound is max|u0| + C max{1, T}.
double uniform_bound_constant(const GridFunction& u0, FractionalOrder alpha,
                              const HamiltonianSpec& hamiltonian, double horizon);

struct TransportConstSpeed { double c = 1.0; };
struct RelaxationOde { double c0 = 1.0; };
struct PowerBarrier { double M = 1.0; int sign = 1; };  // u0(x) + sign M t^alpha
struct CustomCallable { std::function<double(double t, double x)> fn; };

using OracleProblem = std::variant<TransportConstSpeed, RelaxationOde, PowerBarrier, CustomCallable>;

/// Reference value of an oracle problem at (t, x); u0 is ignored by the
/// relaxation and custom variants.
double evaluate(const OracleProblem& problem, FractionalOrder alpha, const Profile& u0, double t,
                double x);

}  // namespace fhj::oracles
