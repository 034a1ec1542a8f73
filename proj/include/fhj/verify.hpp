#pragma once

// Numerical checks of the comparison, regularity and stability statements on
// solver output. Every check is one-sided: worst_margin is the largest excess
// of the checked quantity over its bound, and passed == (worst_margin <= tolerance_used).

#include "fhj/oracles.hpp"
#include "fhj/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fhj::verify {

struct CheckReport {
  std::string check_name;
  bool passed = true;
  double worst_margin = 0.0;
  std::size_t step = 0;   // time node of the worst margin
  std::size_t node = 0;   // flat spatial index of the worst margin
  double tolerance_used = 0.0;
  std::vector<double> series;  // per-parameter distances, for the sweep checks
  std::string note;

  void finish() { passed = worst_margin <= tolerance_used; }
};

/// max |u - v| <= max |u0 - v0| + tol; with ordered initial data also the
/// one-sided u <= v + tol (or v <= u + tol).
CheckReport check_comparison(const SolveResult& u, const SolveResult& v, double tol);

/// |u(t_n) - u(t_m)| <= M |t_n - t_m|^alpha + tol over all node pairs.
CheckReport check_holder_time(const SolveResult& u, double M, double tol);

/// Discrete Lipschitz constant of u(t_n) <= (lip_u0 + L1/L2) E_alpha(L2 t_n^alpha) - L1/L2 + tol.
/// L2 must be > 0; pass a small surrogate for x-independent Hamiltonians.
CheckReport check_lipschitz_space(const SolveResult& u, double lip_u0, double L1, double L2,
                                  double tol);

/// sup |u| <= max |u0| + C max{1, T} + 1e-6.
CheckReport check_uniform_bound(const SolveResult& u, double C);

/// lower - tol <= u <= upper + tol at every node.
CheckReport check_barrier(const SolveResult& u, const oracles::BarrierPair& barriers, double tol);

/// e_k = max over [T/2, T] of |solve(alpha_k) - solve_classical|; e_k must be
/// nonincreasing and e_last <= tol_last. The distances go to `series`.
CheckReport check_alpha_convergence(const ProblemSpec& problem, const std::vector<double>& alphas,
                                    double tol_last);

/// d(eps) = max over [T/2, T] of |solve(H + eps) - solve(H)| must decrease with
/// eps and stay below C eps, C fitted through the origin on the two largest eps.
CheckReport check_hamiltonian_stability(const ProblemSpec& problem, std::vector<double> eps);

/// Largest L_inf distance between two trajectories over slices with t in [T/2, T].
double window_distance(const SolveResult& a, const SolveResult& b);

/// Named suites: "canonical" (all), "comparison", "regularity", "stability".
/// Throws ErrorCode::config on an unknown name.
std::vector<CheckReport> run_suite(const std::string& suite, const ProblemSpec& problem,
                                   std::uint64_t seed);

}  // namespace fhj::verify
