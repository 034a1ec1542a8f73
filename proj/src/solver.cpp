#include "fhj/solver.hpp"

#include "fhj/kernels.hpp"
#include "fhj/oracles.hpp"
#include "fhj/parallel.hpp"
#include "fhj/specialfun.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace fhj {
namespace {

constexpr int kMaxSweeps = 100000;
constexpr double kSweepTol = 1e-13;
constexpr std::size_t kMinChunk = 256;

// Neumaier-compensated running sum of the L1 weights, checked against the
// telescoped value m^{1-alpha} after every step.
class WeightMass {
public:
  explicit WeightMass(FractionalOrder alpha) : e_(1.0 - alpha.value()) {}

  void add_and_check(double b, std::size_t m) {
    const double t = sum_ + b;
    comp_ += std::fabs(sum_) >= std::fabs(b) ? (sum_ - t) + b : (b - t) + sum_;
    sum_ = t;
    const double expected = std::pow(static_cast<double>(m), e_);
    if (std::fabs(sum_ + comp_ - expected) > 1e-12 * expected)
      throw Error(ErrorCode::domain, "L1 weight mass check failed at step " + std::to_string(m));
  }

private:
  double e_;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_finite(std::span<const double> v, std::size_t step) {
  if (!kernels::all_finite(v))
    throw BlowUpError(step, "non-finite value at time step " + std::to_string(step));
}

}  // namespace

double ProblemSpec::theta() const { return viscosity_theta.value_or(hamiltonian.lip_p_bound); }

double ProblemSpec::cfl_number() const {
  const double g = specialfun::gamma(2.0 - alpha.value()) * std::pow(time.dt(), alpha.value());
  return g * (theta() * space.dim() / space.spacing() + hamiltonian.lip_r_bound);
}

double ProblemSpec::cfl_limit() const {
  return cfl_safety * (2.0 - std::pow(2.0, 1.0 - alpha.value()));
}

void ProblemSpec::validate() const {
  hamiltonian.validate();
  if (!(initial.grid() == space))
    throw Error(ErrorCode::grid_mismatch, "initial data grid differs from the problem's space grid");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    throw Error(ErrorCode::domain, "cfl_safety must lie in (0, 1]");
  const double th = theta();
  if (!(th >= 0.0) || !std::isfinite(th))
    throw Error(ErrorCode::domain, "viscosity theta must be finite and >= 0");
  if (th < hamiltonian.lip_p_bound)
    throw Error(ErrorCode::domain, "viscosity theta below lip_p_bound breaks monotonicity");
}

double SolveResult::max_abs() const {
  double m = 0.0;
  for (const auto& g : trajectory) m = std::max(m, g.max_abs());
  return m;
}

void numerical_hamiltonian(const HamiltonianSpec& spec, double t, const TorusGrid& grid,
                           std::span<const double> u, double theta, std::span<double> out) {
  const auto d = static_cast<std::size_t>(grid.dim());
  const double inv_h = 1.0 / grid.spacing();
  parallel_for(
      grid.size(),
      [&](std::size_t begin, std::size_t end) {
        std::array<double, 2> pm{}, pp{};
        for (std::size_t i = begin; i < end; ++i) {
          for (std::size_t k = 0; k < d; ++k) {
            const int axis = static_cast<int>(k);
            pm[k] = (u[i] - u[grid.neighbour(i, axis, -1)]) * inv_h;
            pp[k] = (u[grid.neighbour(i, axis, 1)] - u[i]) * inv_h;
          }
          const auto x = grid.point(i);
          out[i] = lax_friedrichs(spec, t, std::span<const double>(x.data(), d), u[i],
                                  std::span<const double>(pm.data(), d),
                                  std::span<const double>(pp.data(), d), theta);
        }
      },
      kMinChunk);
}

SolveResult solve(const ProblemSpec& problem) {
  problem.validate();
  const double number = problem.cfl_number();
  const double limit = problem.cfl_limit();
  const bool is_explicit = problem.stepping == Stepping::explicit_;
  if (is_explicit && number > limit)
    throw Error(ErrorCode::cfl_violation,
                "explicit step violates the monotonicity condition: " + std::to_string(number) +
                    " > " + std::to_string(limit) + "; reduce dt or use implicit stepping");

  const TimeGrid& tg = problem.time;
  const TorusGrid& grid = problem.space;
  const std::size_t width = grid.size();
  const double theta = problem.theta();

  SolveResult res;
  res.alpha = problem.alpha;
  res.time = tg;
  res.space = grid;
  res.trajectory.reserve(tg.steps() + 1);
  res.diagnostics.reserve(tg.steps());
  res.trajectory.push_back(problem.initial);
  check_finite(problem.initial.values(), 0);

  fracops::L1History hist(problem.alpha, tg, width);
  const double g = hist.step_scale();
  // Diagonal of the implicit system and the Jacobi contraction factor.
  const double kappa = 1.0 + g * (theta * grid.dim() / grid.spacing() + problem.hamiltonian.lip_r_bound);
  const double rho = 1.0 - 1.0 / kappa;
  WeightMass mass(problem.alpha);

  std::vector<double> base(width), lagged(width), hvals(width), next(width), inc(width);
  for (std::size_t m = 1; m <= tg.steps(); ++m) {
    const auto start = std::chrono::steady_clock::now();
    mass.add_and_check(hist.weights()[m - 1], m);
    const auto prev = res.trajectory.back().values();

    hist.lagged_sum(lagged);
    kernels::difference(base, prev, lagged);

    int sweeps = 1;
    if (is_explicit) {
      numerical_hamiltonian(problem.hamiltonian, tg.node(m - 1), grid, prev, theta, hvals);
      for (std::size_t i = 0; i < width; ++i) next[i] = base[i] - g * hvals[i];
    } else {
      const double t = tg.node(m);
      std::copy(base.begin(), base.end(), next.begin());
      for (;; ++sweeps) {
        numerical_hamiltonian(problem.hamiltonian, t, grid, next, theta, hvals);
        double change = 0.0, scale = 1.0;
        for (std::size_t i = 0; i < width; ++i) {
          const double step = (next[i] - base[i] + g * hvals[i]) / kappa;
          next[i] -= step;
          change = std::max(change, std::fabs(step));
          scale = std::max(scale, std::fabs(next[i]));
        }
        check_finite(next, m);
        if (rho == 0.0 || change * rho <= kSweepTol * scale * (1.0 - rho)) break;
        if (sweeps >= kMaxSweeps)
          throw Error(ErrorCode::convergence_budget,
                      "implicit step " + std::to_string(m) + " did not converge");
      }
    }
    check_finite(next, m);

    kernels::difference(inc, next, prev);
    hist.push(inc);
    GridFunction slice(grid, next);

    StepDiagnostics diag;
    const auto [lo, hi] = std::minmax_element(next.begin(), next.end());
    diag.max = *hi;
    diag.min = *lo;
    diag.cfl_margin = limit - number;
    diag.iterations = sweeps;
    diag.history_size = hist.size();
    diag.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.trajectory.push_back(std::move(slice));
    res.diagnostics.push_back(diag);
  }
  return res;
}

SolveResult solve_classical(ProblemSpec problem) {
  problem.alpha = FractionalOrder(1.0);
  return solve(problem);
}

std::optional<std::vector<GridFunction>> exact_trajectory(const ProblemSpec& p) {
  const TimeGrid& tg = p.time;
  const double a = p.alpha.value();
  std::vector<GridFunction> out;
  out.reserve(tg.steps() + 1);
  const HamiltonianKind kind = p.hamiltonian.kind;

  if (kind == HamiltonianKind::zero || kind == HamiltonianKind::constant) {
    const double c = kind == HamiltonianKind::zero ? 0.0 : p.hamiltonian.constant_value;
    for (std::size_t n = 0; n <= tg.steps(); ++n) {
      GridFunction g = p.initial;
      const double shift = c * std::pow(tg.node(n), a) * specialfun::rgamma(1.0 + a);
      for (auto& v : g.values()) v -= shift;
      out.push_back(std::move(g));
    }
    return out;
  }
  if (kind == HamiltonianKind::transport && p.hamiltonian.constant_velocity && p.space.dim() == 1 &&
      p.initial_profile) {
    const double c = (*p.hamiltonian.constant_velocity)[0];
    const double reach = std::max(1.0, std::fabs(c) * std::pow(tg.horizon(), a));
    const oracles::TransportOracle oracle(p.alpha, c, 0.25 / reach);
    const SpaceFunction& u0 = *p.initial_profile;
    const oracles::Profile profile = [&u0](double x) { return u0(std::span<const double>(&x, 1)); };
    for (std::size_t n = 0; n <= tg.steps(); ++n) {
      GridFunction g(p.space);
      const double t = tg.node(n);
      parallel_for(p.space.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
          g[i] = n == 0 ? p.initial[i] : oracle(profile, t, p.space.point(i)[0]);
      });
      out.push_back(std::move(g));
    }
    return out;
  }
  return std::nullopt;
}

std::vector<RefineRow> refine_study(const ProblemSpec& problem, int levels) {
  if (levels < 2) throw Error(ErrorCode::domain, "refine_study needs levels >= 2");
  const double a = problem.alpha.value();
  const bool has_oracle =
      problem.hamiltonian.kind == HamiltonianKind::zero ||
      problem.hamiltonian.kind == HamiltonianKind::constant ||
      (problem.hamiltonian.kind == HamiltonianKind::transport &&
       problem.hamiltonian.constant_velocity && problem.space.dim() == 1 && problem.initial_profile);
  if (!has_oracle)
    throw Error(ErrorCode::oracle_unavailable,
                "no exact solution for Hamiltonian '" + problem.hamiltonian.name + "'");
  if (!problem.initial_profile && problem.hamiltonian.kind == HamiltonianKind::transport)
    throw Error(ErrorCode::oracle_unavailable, "transport refinement needs a continuous initial profile");

  std::vector<RefineRow> rows;
  for (int level = 0; level < levels; ++level) {
    const int k = levels - 1 - level;
    const std::size_t n = problem.space.nodes_per_dim() >> k;
    const auto steps = static_cast<std::size_t>(
        std::llround(static_cast<double>(problem.time.steps()) / std::pow(2.0, k / a)));
    if (n < 2 || steps < 1)
      throw Error(ErrorCode::domain, "refine_study: level " + std::to_string(level) + " is too coarse");

    ProblemSpec p = problem;
    p.space = TorusGrid(problem.space.dim(), n);
    p.time = TimeGrid(problem.time.horizon(), steps);
    if (problem.initial_profile) {
      p.initial = GridFunction::sample(p.space, *problem.initial_profile);
    } else {
      if (problem.space.nodes_per_dim() % n != 0 || problem.space.dim() != 1)
        throw Error(ErrorCode::oracle_unavailable, "refinement without a continuous initial profile");
      // Subsample the finest grid values.
      std::vector<double> v(n);
      const std::size_t stride = problem.space.nodes_per_dim() / n;
      for (std::size_t i = 0; i < n; ++i) v[i] = problem.initial[i * stride];
      p.initial = GridFunction(p.space, std::move(v));
    }
    const SolveResult sol = solve(p);
    const auto exact = exact_trajectory(p);
    RefineRow row;
    row.level = level;
    row.n = n;
    row.steps = steps;
    row.h = p.space.spacing();
    row.dt = p.time.dt();
    for (std::size_t m = 0; m <= steps; ++m) {
      const double e = kernels::max_abs_diff(sol.trajectory[m].values(), (*exact)[m].values());
      row.error_full = std::max(row.error_full, e);
      if (p.time.node(m) >= 0.5 * p.time.horizon() * (1.0 - 1e-12))
        row.error_window = std::max(row.error_window, e);
    }
    if (!rows.empty()) {
      const RefineRow& prev = rows.back();
      if (row.error_full > 0.0 && prev.error_full > 0.0)
        row.order_h = std::log(prev.error_full / row.error_full) / std::log(prev.h / row.h);
      if (row.error_window > 0.0 && prev.error_window > 0.0)
        row.order_dt = std::log(prev.error_window / row.error_window) / std::log(prev.dt / row.dt);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fhj
