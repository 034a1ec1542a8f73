#include "fhj/specialfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fhj::specialfun {
namespace {


bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::string fmt(double v) { return std::to_string(v); }

// log of the largest Wright series term, which is also (to leading order) the
// decay exponent of the density: (1-a) (a^a |z|)^{1/(1-a)}.
double wright_log_peak(double a, double az) {
  return (1.0 - a) * std::pow(std::pow(a, a) * az, 1.0 / (1.0 - a));
}

// The series is used while its largest term is below e^kSeriesLogBudget,
// keeping the absolute rounding error near 1e-13.
constexpr double kSeriesLogBudget = 6.5;
constexpr double kSeriesMaxAlpha = 0.99;
constexpr long double kMittagLefflerRounding = 1e-7L;

// A(phi) of Kanter's representation; increasing on (0, pi).
double kanter_a(double nu, double phi) {
  if (phi <= 0.0) return std::pow(nu, nu / (1.0 - nu)) * (1.0 - nu);
  const double la = nu * std::log(std::sin(nu * phi)) +
                    (1.0 - nu) * std::log(std::sin((1.0 - nu) * phi)) - std::log(std::sin(phi));
  return std::exp(la / (1.0 - nu));
}

// (1 - nu) log A(phi), without the division that amplifies rounding near nu = 1.
double kanter_scaled_log_a(double nu, double phi) {
  if (phi <= 0.0) return nu * std::log(nu) + (1.0 - nu) * std::log1p(-nu);
  return nu * std::log(std::sin(nu * phi)) + (1.0 - nu) * std::log(std::sin((1.0 - nu) * phi)) -
         std::log(std::sin(phi));
}

}  // namespace

SeriesTolerance::SeriesTolerance(double abs_tol_, int max_terms_)
    : abs_tol(abs_tol_), max_terms(max_terms_) {
  if (!(abs_tol > 0.0)) throw Error(ErrorCode::domain, "SeriesTolerance.abs_tol must be > 0");
  if (max_terms < 1) throw Error(ErrorCode::domain, "SeriesTolerance.max_terms must be >= 1");
}

double gamma(double x) {
  if (is_pole(x)) throw Error(ErrorCode::pole, "gamma has a pole at " + fmt(x));
  return std::tgamma(x);
}

double rgamma(double x) {
  if (is_pole(x)) return 0.0;
  if (x < 0.5) {
    // Reflection keeps 1/Gamma finite where Gamma(x) itself would underflow.
    const double g = std::tgamma(1.0 - x);
    if (std::isfinite(g)) return std::sin(std::numbers::pi * x) * g / std::numbers::pi;
    const double s = std::sin(std::numbers::pi * x);
    return std::copysign(std::exp(std::lgamma(1.0 - x) + std::log(std::fabs(s) / std::numbers::pi)), s);
  }
  const double g = std::tgamma(x);
  return std::isfinite(g) ? 1.0 / g : 0.0;
}

double erfc(double z) { return std::erfc(z); }

double mittag_leffler(FractionalOrder alpha, double z, SeriesTolerance tol) {
  const double a = alpha.value();
  if (!std::isfinite(z) || std::fabs(z) > kMittagLefflerMaxArg)
    throw Error(ErrorCode::convergence_budget,
                "mittag_leffler: |z| = " + fmt(std::fabs(z)) + " exceeds the series budget 20");
  if (z == 0.0) return 1.0;

  // Terms in extended precision: the alternating series for z < 0 cancels
  // terms far larger than the result.
  // Terms in extended precision: the alternating series for z < 0 cancels
  // terms far larger than the result. powl and tgammal keep each term within
  // a few ulps (no log/exp round trip), and |z| <= 20 with max_terms <= 400
  // stays far inside the long double range.
  using ld = long double;
  const ld abs_z = std::fabs(static_cast<ld>(z));
  ld sum = 0.0L, comp = 0.0L, max_term = 0.0L, abs_sum = 0.0L;
  for (int j = 0; j < tol.max_terms; ++j) {
    const ld mag = std::pow(abs_z, static_cast<ld>(j)) / std::tgamma(static_cast<ld>(a) * j + 1.0L);
    const ld term = (z < 0.0 && (j % 2 == 1)) ? -mag : mag;
    const ld t = sum + term;
    comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    max_term = std::max(max_term, mag);
    abs_sum += mag;
    if (mag < tol.abs_tol && j > 0 && mag < max_term) {
      const ld rounding = 4.0L * std::numeric_limits<ld>::epsilon() * abs_sum;
      if (rounding > kMittagLefflerRounding * std::max(1.0L, std::fabs(sum)))
        throw Error(ErrorCode::convergence_budget,
                    "mittag_leffler: cancellation (largest term " + fmt(static_cast<double>(max_term)) +
                        ") exceeds the precision budget");
      return static_cast<double>(sum + comp);
    }
  }
  throw Error(ErrorCode::convergence_budget,
              "mittag_leffler: terms above abs_tol after " + std::to_string(tol.max_terms) +
                  " terms (z = " + fmt(z) + ")");
}

double wright_series(FractionalOrder alpha, double z, SeriesTolerance tol) {
  const double a = alpha.value();
  if (a >= 1.0) throw Error(ErrorCode::domain, "wright: alpha = 1 is a point mass");
  if (!(z <= 0.0)) throw Error(ErrorCode::domain, "wright: z must be <= 0, got " + fmt(z));
  if (z == 0.0) return rgamma(1.0 - a);

  CompensatedSum sum;
  double p = 1.0;  // z^j / j!, by recurrence while it stays normal
  double log_p = 0.0;
  const double log_az = std::log(-z);
  double prev_bound = std::numeric_limits<double>::infinity();
  for (int j = 0; j < tol.max_terms; ++j) {
    if (j > 0) {
      p *= z / j;
      log_p += log_az - std::log(static_cast<double>(j));
    }
    const double x = 1.0 - a - a * j;
    // |1/Gamma(x)| <= Gamma(1-x)/pi by reflection; bounds the remaining terms.
    const double log_bound =
        x < 0.5 ? log_p + std::lgamma(1.0 - x) - std::log(std::numbers::pi) : log_p - std::lgamma(x);
    double term = 0.0;
    if (!is_pole(x)) {
      const double rg = rgamma(x);
      if (std::isnormal(p) && std::isfinite(rg)) {
        term = p * rg;
      } else {
        const double s = std::sin(std::numbers::pi * x);
        const double mag = std::exp(log_p + std::lgamma(1.0 - x) + std::log(std::fabs(s) / std::numbers::pi));
        const bool negative = (s < 0.0) != (j % 2 == 1);
        term = negative ? -mag : mag;
      }
    }
    sum.add(term);
    if (!std::isfinite(sum.value()))
      throw Error(ErrorCode::convergence_budget,
                  "wright: series terms overflow at j = " + std::to_string(j) + " (z = " + fmt(z) + ")");
    const double bound = std::exp(log_bound);
    if (j > 0 && bound < prev_bound && bound < tol.abs_tol) return sum.value();
    prev_bound = bound;
  }
  throw Error(ErrorCode::convergence_budget,
              "wright: terms above abs_tol after " + std::to_string(tol.max_terms) +
                  " terms (z = " + fmt(z) + ")");
}

double wright_integral(FractionalOrder alpha, double z) {
  const double nu = alpha.value();
  if (nu >= 1.0) throw Error(ErrorCode::domain, "wright: alpha = 1 is a point mass");
  if (!(z < 0.0)) throw Error(ErrorCode::domain, "wright_integral: z must be < 0");
  const double s = -z;
  const double x = std::pow(s, 1.0 / (1.0 - nu));
  // Below the underflow of x the density is far below any representable mass.
  if (x < 1e-300) return 0.0;
  auto integrand = [&](double phi) {
    const double A = kanter_a(nu, phi);
    const double e = x * A;
    return e > 745.0 ? 0.0 : A * std::exp(-e);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double integral = ts.integrate(integrand, 0.0, std::numbers::pi, 1e-14);
  return std::pow(s, nu / (1.0 - nu)) * integral / (std::numbers::pi * (1.0 - nu));
}

double wright(FractionalOrder alpha, double z, SeriesTolerance tol) {
  const double a = alpha.value();
  if (a >= 1.0) throw Error(ErrorCode::domain, "wright: alpha = 1 is a point mass");
  if (!(z <= 0.0)) throw Error(ErrorCode::domain, "wright: z must be <= 0, got " + fmt(z));
  if (-z > kWrightMaxArg)
    throw Error(ErrorCode::convergence_budget,
                "wright: |z| = " + fmt(-z) + " exceeds Z_max = 30");
  // Near alpha = 1 the series terms decay only after many hundred indices.
  if (z == 0.0) return wright_series(alpha, z, tol);
  if (a <= kSeriesMaxAlpha && wright_log_peak(a, -z) <= kSeriesLogBudget) {
    try {
      return wright_series(alpha, z, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::convergence_budget) throw;
    }
  }
  return wright_integral(alpha, z);
}

double wright_tail_bound(FractionalOrder alpha, double Z, int moment) {
  const double nu = alpha.value();
  if (nu >= 1.0) throw Error(ErrorCode::domain, "wright: alpha = 1 is a point mass");
  if (!(Z > 0.0)) return std::numeric_limits<double>::infinity();
  const double A0 = kanter_a(nu, 0.0);
  const double q = nu / (1.0 - nu);
  const double x = std::pow(Z, 1.0 / (1.0 - nu));
  if (x * A0 < 1.0) return std::numeric_limits<double>::infinity();
  // W(-z) <= z^q A0 exp(-z^{1/(1-nu)} A0) / (1-nu) once z^{1/(1-nu)} A0 >= 1;
  // the bound times z^moment is log-concave, so its tail integral is at most
  // g(Z) / |(log g)'(Z)|.
  const double log_g = (moment + q) * std::log(Z) + std::log(A0 / (1.0 - nu)) - x * A0;
  const double dlog = (moment + q) / Z - A0 / (1.0 - nu) * std::pow(Z, q);
  if (dlog >= 0.0) return std::numeric_limits<double>::infinity();
  return std::exp(log_g) / -dlog;
}

double wright_cutoff(FractionalOrder alpha, int moment, double tail_tol) {
  constexpr double step = 0.05;
  for (double Z = step; Z <= kWrightMaxArg + 1e-12; Z += step) {
    if (wright_tail_bound(alpha, Z, moment) <= tail_tol) return Z;
  }
  throw Error(ErrorCode::tail_not_negligible,
              "wright: tail beyond Z_max = 30 exceeds " + fmt(tail_tol) +
                  " for alpha = " + fmt(alpha.value()));
}

MomentResult wright_moment(FractionalOrder alpha, int moment, QuadratureSettings quad) {
  const double a = alpha.value();
  if (a >= 1.0) throw Error(ErrorCode::domain, "wright: alpha = 1 is a point mass");
  MomentResult r;
  r.z_max = wright_cutoff(alpha, moment, quad.tail_tol);
  r.tail_bound = wright_tail_bound(alpha, r.z_max, moment);

  if (a > kSeriesMaxAlpha) {
    // The density is a spike of width ~ 1-alpha near z = 1. Integrate the
    // Kanter representation in z first: int z^k W(-z) dz
    // = Gamma(1 + k(1-alpha))/pi int_0^pi A(phi)^{-k(1-alpha)} dphi.
    const double q = moment * (1.0 - a);
    boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0.0;
    const double v = ts.integrate([&](double phi) { return std::exp(-moment * kanter_scaled_log_a(a, phi)); }, 0.0,
                                  std::numbers::pi, quad.rel_tol, &err);
    r.value = gamma(1.0 + q) * v / std::numbers::pi;
    r.error_estimate = gamma(1.0 + q) * err / std::numbers::pi;
    return r;
  }
  auto integrand = [&](double s) { return std::pow(s, moment) * wright(alpha, -s); };
  // Split where the evaluation switches route so each piece is smooth.
  double z_switch = a > kSeriesMaxAlpha ? 0.0
                                        : std::pow(kSeriesLogBudget / (1.0 - a), 1.0 - a) / std::pow(a, a);
  z_switch = std::clamp(z_switch, 0.0, r.z_max);

  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err1 = 0.0, err2 = 0.0;
  double v = GK::integrate(integrand, 0.0, z_switch, 15, quad.rel_tol, &err1);
  if (z_switch < r.z_max) v += GK::integrate(integrand, z_switch, r.z_max, 15, quad.rel_tol, &err2);
  r.value = v;
  r.error_estimate = err1 + err2;
  return r;
}

double wright_normalization(FractionalOrder alpha, QuadratureSettings quad) {
  return wright_moment(alpha, 0, quad).value;
}

double wright_first_moment(FractionalOrder alpha, QuadratureSettings quad) {
  return wright_moment(alpha, 1, quad).value;
}

double power_caputo(double a, double beta, FractionalOrder alpha, double t) {
  if (!(t > a))
    throw Error(ErrorCode::domain, "power_caputo: need t > a (t = " + fmt(t) + ", a = " + fmt(a) + ")");
  if (!(beta > 0.0)) throw Error(ErrorCode::domain, "power_caputo: beta must be > 0");
  const double al = alpha.value();
  return gamma(beta + 1.0) * rgamma(beta - al + 1.0) * std::pow(t - a, beta - al);
}

}  // namespace fhj::specialfun
