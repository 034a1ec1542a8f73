#include "fhj/verify.hpp"

#include "fhj/kernels.hpp"
#include "fhj/specialfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fhj::verify {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_same_grids(const SolveResult& u, const SolveResult& v) {
  if (!(u.time == v.time) || !(u.space == v.space) || u.trajectory.size() != v.trajectory.size())
    throw Error(ErrorCode::grid_mismatch, "trajectories live on different grids");
}

void track(CheckReport& r, double margin, std::size_t step, std::size_t node) {
  if (margin > r.worst_margin) {
    r.worst_margin = margin;
    r.step = step;
    r.node = node;
  }
}

CheckReport start(const char* name, double tol) {
  CheckReport r;
  r.check_name = name;
  r.worst_margin = kNegInf;
  r.tolerance_used = tol;
  return r;
}

bool window_slice(const TimeGrid& tg, std::size_t n) {
  return tg.node(n) >= 0.5 * tg.horizon() * (1.0 - 1e-12);
}

// Largest |u_i - u_j| / h over axis neighbours, and where it happens.
kernels::MaxLocation lipschitz_at(const GridFunction& g) {
  const TorusGrid& grid = g.grid();
  kernels::MaxLocation best;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int axis = 0; axis < grid.dim(); ++axis) {
      const double d = std::fabs(g[grid.neighbour(i, axis, 1)] - g[i]) / grid.spacing();
      if (d > best.value) best = {d, i};
    }
  return best;
}

ProblemSpec with_initial(const ProblemSpec& p, std::vector<double> values) {
  ProblemSpec q = p;
  q.initial = GridFunction(p.space, std::move(values));
  q.initial_profile.reset();
  return q;
}

}  // namespace

double window_distance(const SolveResult& a, const SolveResult& b) {
  require_same_grids(a, b);
  double d = 0.0;
  for (std::size_t n = 0; n < a.trajectory.size(); ++n)
    if (window_slice(a.time, n))
      d = std::max(d, kernels::max_abs_diff(a.trajectory[n].values(), b.trajectory[n].values()));
  return d;
}

CheckReport check_comparison(const SolveResult& u, const SolveResult& v, double tol) {
  require_same_grids(u, v);
  CheckReport r = start("comparison", tol);
  const auto u0 = u.trajectory.front().values();
  const auto v0 = v.trajectory.front().values();
  const double initial_gap = kernels::max_abs_diff(u0, v0);
  bool u_below = true, v_below = true;
  for (std::size_t i = 0; i < u0.size(); ++i) {
    u_below = u_below && u0[i] <= v0[i];
    v_below = v_below && v0[i] <= u0[i];
  }
  for (std::size_t n = 0; n < u.trajectory.size(); ++n) {
    const auto un = u.trajectory[n].values();
    const auto vn = v.trajectory[n].values();
    const auto loc = kernels::max_abs_diff_at(un, vn);
    track(r, loc.value - initial_gap, n, loc.index);
    if (u_below || v_below) {
      for (std::size_t i = 0; i < un.size(); ++i) {
        const double excess = u_below ? un[i] - vn[i] : vn[i] - un[i];
        track(r, excess, n, i);
      }
    }
  }
  if (u_below || v_below) r.note = u_below ? "ordered: u0 <= v0" : "ordered: v0 <= u0";
  r.finish();
  return r;
}

CheckReport check_holder_time(const SolveResult& u, double M, double tol) {
  CheckReport r = start("holder_time", tol);
  const double a = u.alpha.value();
  const std::size_t N = u.trajectory.size();
  for (std::size_t n = 1; n < N; ++n)
    for (std::size_t m = 0; m < n; ++m) {
      const double bound = M * std::pow(u.time.node(n) - u.time.node(m), a);
      const double d = kernels::max_abs_diff(u.trajectory[n].values(), u.trajectory[m].values());
      if (d - bound > r.worst_margin) {
        const auto loc = kernels::max_abs_diff_at(u.trajectory[n].values(), u.trajectory[m].values());
        track(r, d - bound, n, loc.index);
        r.note = "worst pair steps " + std::to_string(m) + ", " + std::to_string(n);
      }
    }
  r.finish();
  return r;
}

CheckReport check_lipschitz_space(const SolveResult& u, double lip_u0, double L1, double L2,
                                  double tol) {
  if (!(L2 > 0.0)) throw Error(ErrorCode::domain, "check_lipschitz_space needs L2 > 0");
  CheckReport r = start("lipschitz_space", tol);
  const double a = u.alpha.value();
  const double ratio = L1 / L2;
  for (std::size_t n = 0; n < u.trajectory.size(); ++n) {
    const double t = u.time.node(n);
    const double bound =
        (lip_u0 + ratio) * specialfun::mittag_leffler(u.alpha, L2 * std::pow(t, a)) - ratio;
    const auto loc = lipschitz_at(u.trajectory[n]);
    track(r, loc.value - bound, n, loc.index);
  }
  r.finish();
  return r;
}

CheckReport check_uniform_bound(const SolveResult& u, double C) {
  CheckReport r = start("uniform_bound", 1e-6);
  const double bound = u.trajectory.front().max_abs() + C * std::max(1.0, u.time.horizon());
  for (std::size_t n = 0; n < u.trajectory.size(); ++n) {
    const auto v = u.trajectory[n].values();
    for (std::size_t i = 0; i < v.size(); ++i) track(r, std::fabs(v[i]) - bound, n, i);
  }
  r.finish();
  return r;
}

CheckReport check_barrier(const SolveResult& u, const oracles::BarrierPair& barriers, double tol) {
  CheckReport r = start("barrier", tol);
  for (std::size_t n = 0; n < u.trajectory.size(); ++n) {
    const double t = u.time.node(n);
    const auto v = u.trajectory[n].values();
    for (std::size_t i = 0; i < v.size(); ++i)
      track(r, std::max(barriers.lower(t, i) - v[i], v[i] - barriers.upper(t, i)), n, i);
  }
  r.finish();
  return r;
}

CheckReport check_alpha_convergence(const ProblemSpec& problem, const std::vector<double>& alphas,
                                    double tol_last) {
  if (alphas.empty()) throw Error(ErrorCode::domain, "check_alpha_convergence needs alphas");
  for (std::size_t k = 0; k < alphas.size(); ++k)
    if (!(alphas[k] > 0.0 && alphas[k] < 1.0) || (k > 0 && !(alphas[k] > alphas[k - 1])))
      throw Error(ErrorCode::domain, "alphas must be ascending inside (0, 1)");
  CheckReport r = start("alpha_convergence", 0.0);
  const SolveResult classical = solve_classical(problem);
  for (double a : alphas) {
    ProblemSpec p = problem;
    p.alpha = FractionalOrder(a);
    r.series.push_back(window_distance(solve(p), classical));
  }
  for (std::size_t k = 1; k < r.series.size(); ++k)
    track(r, r.series[k] - r.series[k - 1], k, 0);
  track(r, r.series.back() - tol_last, r.series.size() - 1, 0);
  r.note = "tol_last " + std::to_string(tol_last);
  r.finish();
  return r;
}

CheckReport check_hamiltonian_stability(const ProblemSpec& problem, std::vector<double> eps) {
  if (eps.empty()) throw Error(ErrorCode::domain, "check_hamiltonian_stability needs eps values");
  std::sort(eps.begin(), eps.end(), std::greater<>());
  if (!(eps.back() >= 0.0)) throw Error(ErrorCode::domain, "eps values must be >= 0");
  CheckReport r = start("hamiltonian_stability", 1e-9);
  const SolveResult base = solve(problem);
  for (double e : eps) {
    ProblemSpec p = problem;
    p.hamiltonian = problem.hamiltonian.shifted(e);
    r.series.push_back(window_distance(solve(p), base));
  }
  double C = 0.0;
  if (eps.size() >= 2) {
    const double num = r.series[0] * eps[0] + r.series[1] * eps[1];
    const double den = eps[0] * eps[0] + eps[1] * eps[1];
    C = den > 0.0 ? num / den : 0.0;
  } else if (eps[0] > 0.0) {
    C = r.series[0] / eps[0];
  }
  for (std::size_t k = 0; k < eps.size(); ++k) {
    track(r, r.series[k] - C * eps[k] * (1.0 + 1e-6), k, 0);
    if (k > 0) track(r, r.series[k] - r.series[k - 1], k, 0);
  }
  r.note = "C " + std::to_string(C);
  r.finish();
  return r;
}

std::vector<CheckReport> run_suite(const std::string& suite, const ProblemSpec& problem,
                                   std::uint64_t seed) {
  const bool all = suite == "canonical";
  if (!all && suite != "comparison" && suite != "regularity" && suite != "stability")
    throw ConfigError("suite", "unknown suite '" + suite + "'");
  std::vector<CheckReport> out;
  const SolveResult u = solve(problem);
  const GridFunction& u0 = problem.initial;
  const TorusGrid& grid = problem.space;

  if (all || suite == "comparison") {
    out.push_back(check_comparison(u, u, 1e-10));
    out.back().check_name = "comparison_self";

    std::vector<double> shifted(u0.values().begin(), u0.values().end());
    for (double& x : shifted) x += 0.1;
    out.push_back(check_comparison(u, solve(with_initial(problem, shifted)), 1e-10));
    out.back().check_name = "comparison_shift";

    std::vector<double> ordered(u0.values().begin(), u0.values().end());
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      const double s = std::sin(std::numbers::pi * grid.point(i)[0]);
      ordered[i] += 0.05 + 0.05 * s * s;
    }
    out.push_back(check_comparison(u, solve(with_initial(problem, ordered)), 1e-10));
    out.back().check_name = "comparison_ordered";
  }

  if (all || suite == "regularity") {
    const HamiltonianSpec& H = problem.hamiltonian;
    const double lip_u0 = u0.discrete_lipschitz();
    SampleBox box;
    box.horizon = problem.time.horizon();
    box.dim = grid.dim();
    box.r_max = 2.0 * u0.max_abs() + 1.0;
    box.p_max = 2.0 * lip_u0 + 1.0;
    const AssumptionReport ar = check_assumptions(H, 4096, seed, box);
    CheckReport a = start("assumptions", 0.0);
    a.worst_margin = std::max({ar.lipschitz_x_margin - 1e-9, ar.monotone_r_margin - 1e-12,
                               ar.lipschitz_r_margin - 1e-9, ar.lipschitz_p_margin - 1e-9});
    a.note = "samples " + std::to_string(ar.samples) + ", seed " + std::to_string(seed);
    a.finish();
    out.push_back(a);

    const oracles::BarrierPair barriers =
        oracles::barrier_pair(u0, problem.alpha, H, lip_u0, problem.time.horizon());
    out.push_back(check_holder_time(u, barriers.M(), 0.02));
    out.back().note += "; M " + std::to_string(barriers.M());

    // L2 = 0 (x-independent H) uses a small surrogate; the bound then tends to lip_u0.
    const double L2 = H.lip_xp_const_L2 > 0.0 ? H.lip_xp_const_L2 : 1e-6;
    out.push_back(check_lipschitz_space(u, lip_u0, H.lip_x_const_L1, L2, 0.02));
    if (!(H.lip_xp_const_L2 > 0.0)) out.back().note = "L2 surrogate 1e-6";

    const double C = oracles::uniform_bound_constant(u0, problem.alpha, H, problem.time.horizon());
    out.push_back(check_uniform_bound(u, C));
    out.back().note = "C " + std::to_string(C);

    out.push_back(check_barrier(u, barriers, 1e-2));
  }

  if (all || suite == "stability") {
    out.push_back(check_hamiltonian_stability(problem, {1e-1, 1e-2, 1e-3}));
    // At alpha = 0.95 a unit-wavenumber transport mode still decays at rate
    // ~ (2 pi)^{1/alpha} |cos(pi / (2 alpha))| ~ 0.6 relative to alpha = 1,
    // so the last distance on the canonical problem is ~0.3.
    out.push_back(check_alpha_convergence(problem, {0.6, 0.8, 0.95}, 0.4));
  }
  return out;
}

}  // namespace fhj::verify
