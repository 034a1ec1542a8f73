#pragma once

// Special functions: gamma, erfc, Mittag-Leffler E_alpha, the Wright function
// W_{-alpha,1-alpha} (M-Wright density) and Caputo derivatives of shifted
// powers. All functions are pure and thread-safe.

#include "fhj/fractional_order.hpp"

namespace fhj::specialfun {

/// Truncation control for the power series below.
struct SeriesTolerance {
  double abs_tol = 1e-14;
  int max_terms = 400;

  SeriesTolerance() = default;
  SeriesTolerance(double abs_tol, int max_terms);
};

/// Gamma(x); throws ErrorCode::pole at 0, -1, -2, ...
double gamma(double x);

/// 1/Gamma(x), which is 0 at the poles of Gamma.
double rgamma(double x);

double erfc(double z);

/// Arguments beyond this magnitude are refused rather than summed.
inline constexpr double kMittagLefflerMaxArg = 20.0;

/// E_alpha(z) = sum_j z^j / Gamma(alpha j + 1) for real z, |z| <= 20.
///
/// Throws ErrorCode::convergence_budget when the terms have not dropped below
/// abs_tol after max_terms, or when cancellation between terms would leave an
/// estimated rounding error above 1e-7 max(1, |E|). Terms are summed in long double.
double mittag_leffler(FractionalOrder alpha, double z, SeriesTolerance tol = {});

/// Largest admissible |z| for the Wright function.
inline constexpr double kWrightMaxArg = 30.0;

/// W_{-alpha,1-alpha}(z) for z <= 0 and 0 < alpha < 1.
///
/// Uses the power series (compensated summation) while the largest term stays
/// small enough for double precision, and the positive integral
/// representation of the one-sided stable law beyond that. The result is a
/// probability density in -z: nonnegative, unit mass, mean 1/Gamma(alpha+1).
double wright(FractionalOrder alpha, double z, SeriesTolerance tol = {});

/// Series route only; throws ErrorCode::convergence_budget if max_terms is hit.
double wright_series(FractionalOrder alpha, double z, SeriesTolerance tol = {});

/// Integral route only (Kanter's representation), valid for z < 0.
double wright_integral(FractionalOrder alpha, double z);

/// Rigorous upper bound on int_Z^inf z^moment W(-z) dz, or +inf when the
/// bound does not apply at Z (Z too small).
double wright_tail_bound(FractionalOrder alpha, double Z, int moment);

struct QuadratureSettings {
  double rel_tol = 1e-12;
  double tail_tol = 1e-12;
};

struct MomentResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double tail_bound = 0.0;
  double z_max = 0.0;
};

/// Smallest truncation point (<= 30) whose tail bound is below tail_tol;
/// throws ErrorCode::tail_not_negligible if none exists.
double wright_cutoff(FractionalOrder alpha, int moment, double tail_tol);

/// int_0^inf z^moment W(-z) dz by adaptive quadrature on [0, z_max] plus tail bound.
MomentResult wright_moment(FractionalOrder alpha, int moment, QuadratureSettings quad = {});

/// Zeroth moment; should be 1.
double wright_normalization(FractionalOrder alpha, QuadratureSettings quad = {});

/// First moment; should be 1/Gamma(alpha+1).
double wright_first_moment(FractionalOrder alpha, QuadratureSettings quad = {});

/// Caputo derivative of order alpha of (t-a)^beta, i.e.
/// Gamma(beta+1)/Gamma(beta-alpha+1) (t-a)^(beta-alpha), for t > a, 0 < beta <= 1.
double power_caputo(double a, double beta, FractionalOrder alpha, double t);

}  // namespace fhj::specialfun
