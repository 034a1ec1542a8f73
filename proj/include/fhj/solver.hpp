#pragma once

// Time marching for D_t^alpha u + H(t, x, u, Du) = 0 on the torus: L1 weights
// in time, Lax-Friedrichs in space.
//
// Implicit stepping (default) evaluates H at the new level and is monotone
// for every dt; explicit stepping evaluates H at the previous level and
// refuses to run unless
//   Gamma(2-alpha) dt^alpha (theta d/h + lambda_r) <= cfl_safety (2 - 2^{1-alpha}),
// the condition under which its update is monotone.

#include "fhj/fracops.hpp"
#include "fhj/grid.hpp"
#include "fhj/hamiltonians.hpp"

#include <optional>
#include <vector>

namespace fhj {

enum class Stepping { implicit, explicit_ };

struct ProblemSpec {
  FractionalOrder alpha{0.5};
  TimeGrid time{0.5, 512};
  TorusGrid space{1, 256};
  HamiltonianSpec hamiltonian = hamiltonians::zero();
  GridFunction initial{TorusGrid{1, 256}};
  /// Continuous u0, when known; oracles evaluate it off the grid.
  std::optional<SpaceFunction> initial_profile;
  /// Lax-Friedrichs viscosity; defaults to hamiltonian.lip_p_bound.
  std::optional<double> viscosity_theta;
  double cfl_safety = 0.9;
  Stepping stepping = Stepping::implicit;

  double theta() const;
  /// Gamma(2-alpha) dt^alpha (theta d/h + lambda_r).
  double cfl_number() const;
  /// Largest admissible cfl_number for explicit stepping.
  double cfl_limit() const;
  void validate() const;
};

struct StepDiagnostics {
  double max = 0.0;
  double min = 0.0;
  double cfl_margin = 0.0;    // cfl_limit - cfl_number
  int iterations = 0;         // fixed-point sweeps (implicit), 1 otherwise
  std::size_t history_size = 0;
  double wall_seconds = 0.0;
};

struct SolveResult {
  FractionalOrder alpha{0.5};
  TimeGrid time{1.0, 1};
  TorusGrid space{1, 2};
  std::vector<GridFunction> trajectory;     // N+1 slices
  std::vector<StepDiagnostics> diagnostics; // N records, step n at index n-1

  const GridFunction& at(std::size_t n) const { return trajectory.at(n); }
  double max_abs() const;
};

/// Throws ErrorCode::cfl_violation (explicit stepping only), BlowUpError on a
/// non-finite value, ErrorCode::convergence_budget if the implicit iteration
/// stalls.
SolveResult solve(const ProblemSpec& problem);

/// solve() with alpha = 1: backward (or forward, for explicit stepping) Euler.
SolveResult solve_classical(ProblemSpec problem);

/// Lax-Friedrichs numerical Hamiltonian of a whole slice at time t.
void numerical_hamiltonian(const HamiltonianSpec& spec, double t, const TorusGrid& grid,
                           std::span<const double> u, double theta, std::span<double> out);

struct RefineRow {
  int level = 0;
  std::size_t n = 0;
  std::size_t steps = 0;
  double h = 0.0;
  double dt = 0.0;
  double error_full = 0.0;    // max over all nodes and slices
  double error_window = 0.0;  // slices with t in [T/2, T]
  double order_h = 0.0;       // log2 error ratio to the previous level; 0 on the first
  double order_dt = 0.0;      // window error ratio against the dt ratio
};

/// Errors against the exact solution on `levels` grids ending at the problem's
/// own (n, N); coarser levels use n/2^k and N/2^{k/alpha}. Oracles exist for
/// H = 0, H = const and 1D constant-speed transport with initial_profile set;
/// otherwise ErrorCode::oracle_unavailable.
std::vector<RefineRow> refine_study(const ProblemSpec& problem, int levels);

/// Exact solution for the refine_study problem classes, or nullopt.
std::optional<std::vector<GridFunction>> exact_trajectory(const ProblemSpec& problem);

}  // namespace fhj
