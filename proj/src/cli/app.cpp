#include "fhj/cli.hpp"

#include "fhj/oracles.hpp"
#include "fhj/specialfun.hpp"
#include "fhj/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

namespace fhj::cli {
namespace {

int code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::config: return static_cast<int>(ExitCode::config);
    case ErrorCode::cfl_violation: return static_cast<int>(ExitCode::cfl);
    case ErrorCode::blow_up: return static_cast<int>(ExitCode::blow_up);
    default: return static_cast<int>(ExitCode::failure);
  }
}

// Output stream: a file when a path is given, stdout otherwise.
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error(ErrorCode::io, "cannot write " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

std::vector<double> arange(double from, double to, double step) {
  if (!(step > 0.0)) throw ConfigError("step", "must be > 0");
  if (!(to >= from)) throw ConfigError("to", "must be >= from");
  std::vector<double> xs;
  const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) xs.push_back(from + static_cast<double>(k) * step);
  return xs;
}

FractionalOrder order_arg(double a) {
  try {
    return FractionalOrder(a);
  } catch (const Error& e) {
    throw ConfigError("alpha", e.what());
  }
}

int cmd_solve(const std::string& config, std::string out_dir, const std::string& format,
              bool plot_data) {
  const RunConfig cfg = load_config(config);
  if (out_dir.empty()) out_dir = cfg.output_path.empty() ? "out" : cfg.output_path;
  const SolveResult r = solve(build_problem(cfg));
  emit_result(r, cfg, out_dir, format == "json" ? Format::json : Format::csv, plot_data);
  return 0;
}

int cmd_verify(const std::string& config, const std::string& suite, const std::string& out) {
  const RunConfig cfg = load_config(config);
  const auto reports = verify::run_suite(suite, build_problem(cfg), cfg.seed);
  Sink sink(out);
  bool ok = true;
  for (const auto& r : reports) {
    nlohmann::json j = {{"check", r.check_name},        {"passed", r.passed},
                        {"worst_margin", r.worst_margin}, {"step", r.step},
                        {"node", r.node},                {"tolerance", r.tolerance_used},
                        {"series", r.series},            {"note", r.note}};
    sink.os() << j.dump() << '\n';
    ok = ok && r.passed;
  }
  return ok ? 0 : static_cast<int>(ExitCode::check_failed);
}

int cmd_refine(const std::string& config, int levels, const std::string& out) {
  const RunConfig cfg = load_config(config);
  const auto rows = refine_study(build_problem(cfg), levels);
  Sink sink(out);
  auto& os = sink.os();
  os << "level,n,N,h,dt,error_full,error_window,order_h,order_dt\n";
  bool decreasing = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const RefineRow& r = rows[k];
    os << r.level << ',' << r.n << ',' << r.steps << ',' << format_double(r.h) << ','
       << format_double(r.dt) << ',' << format_double(r.error_full) << ','
       << format_double(r.error_window) << ',' << format_double(r.order_h) << ','
       << format_double(r.order_dt) << '\n';
    if (k > 0 && !(r.error_full < rows[k - 1].error_full) && rows[k - 1].error_full > 0.0)
      decreasing = false;
  }
  if (!decreasing) std::cerr << "refine: errors are not strictly decreasing\n";
  return decreasing ? 0 : static_cast<int>(ExitCode::check_failed);
}

struct OracleArgs {
  std::string variant = "transport";
  double alpha = 0.5;
  double speed = 1.0;
  double c0 = 1.0;
  std::vector<double> times{0.5};
  std::size_t n = 64;
  std::string profile = "sine";
  double from = 0.0, to = 1.0, step = 0.1;
  std::string config;
  std::string out;
};

int cmd_oracle(const OracleArgs& a) {
  Sink sink(a.out);
  auto& os = sink.os();
  if (a.variant == "transport") {
    const FractionalOrder alpha = order_arg(a.alpha);
    if (a.profile != "sine" && a.profile != "cosine") throw ConfigError("profile", "sine or cosine");
    const bool sine = a.profile == "sine";
    const oracles::Profile u0 = [sine](double x) {
      return sine ? std::sin(2.0 * std::numbers::pi * x) : std::cos(2.0 * std::numbers::pi * x);
    };
    if (a.n < 1) throw ConfigError("n", "must be >= 1");
    os << "t,x,u\n";
    for (double t : a.times)
      for (std::size_t i = 0; i < a.n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(a.n);
        os << format_double(t) << ',' << format_double(x) << ','
           << format_double(oracles::exact_transport(u0, alpha, a.speed, t, x)) << '\n';
      }
  } else if (a.variant == "relaxation") {
    const FractionalOrder alpha = order_arg(a.alpha);
    os << "t,u\n";
    for (double t : arange(a.from, a.to, a.step))
      os << format_double(t) << ',' << format_double(oracles::relaxation_ode(a.c0, alpha, t)) << '\n';
  } else if (a.variant == "barrier") {
    if (a.config.empty()) throw ConfigError("config", "barrier oracle needs -c config.json");
    const RunConfig cfg = load_config(a.config);
    const ProblemSpec p = build_problem(cfg);
    const auto b = oracles::barrier_pair(p.initial, p.alpha, p.hamiltonian,
                                         p.initial.discrete_lipschitz(), p.time.horizon());
    os << "# M=" << format_double(b.M()) << '\n';
    os << (p.space.dim() == 2 ? "t,x,y,lower,upper\n" : "t,x,lower,upper\n");
    for (double t : a.times)
      for (std::size_t i = 0; i < p.space.size(); ++i) {
        const auto x = p.space.point(i);
        os << format_double(t) << ',' << format_double(x[0]) << ',';
        if (p.space.dim() == 2) os << format_double(x[1]) << ',';
        os << format_double(b.lower(t, i)) << ',' << format_double(b.upper(t, i)) << '\n';
      }
  } else {
    throw ConfigError("variant", "unknown oracle '" + a.variant + "' (transport, relaxation, barrier)");
  }
  return 0;
}

int cmd_table(const std::string& fn, double alpha_v, double from, double to, double step,
              double beta, const std::string& out) {
  const std::vector<double> xs = arange(from, to, step);
  std::function<double(double)> f;
  if (fn == "gamma") {
    f = [](double x) { return specialfun::gamma(x); };
  } else if (fn == "erfc") {
    f = [](double x) { return specialfun::erfc(x); };
  } else if (fn == "mittag_leffler") {
    const FractionalOrder a = order_arg(alpha_v);
    f = [a](double x) { return specialfun::mittag_leffler(a, x); };
  } else if (fn == "wright") {
    const FractionalOrder a = order_arg(alpha_v);
    f = [a](double x) { return specialfun::wright(a, x); };
  } else if (fn == "power_caputo") {
    const FractionalOrder a = order_arg(alpha_v);
    f = [a, beta](double t) { return specialfun::power_caputo(0.0, beta, a, t); };
  } else {
    throw ConfigError("fn", "unknown function '" + fn +
                                "' (gamma, erfc, mittag_leffler, wright, power_caputo)");
  }
  Sink sink(out);
  sink.os() << "x,value\n";
  for (double x : xs) sink.os() << format_double(x) << ',' << format_double(f(x)) << '\n';
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Time-fractional Hamilton-Jacobi solver and checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FHJ_VERSION);

  std::string config, out, format = "csv", suite = "canonical";
  bool plot_data = false;
  int levels = 4;
  OracleArgs oa;
  std::string fn = "mittag_leffler";
  double alpha = 0.5, from = -5.0, to = 0.0, step = 0.1, beta = 1.0;

  auto* s = app.add_subcommand("solve", "Solve a problem and write the trajectory");
  s->add_option("-c,--config", config, "JSON config")->required();
  s->add_option("-o,--output", out, "Output directory");
  s->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  s->add_flag("--plot-data", plot_data, "Also write one CSV per time slice");

  auto* v = app.add_subcommand("verify", "Run a check suite; one JSON report per line");
  v->add_option("-c,--config", config, "JSON config")->required();
  v->add_option("--suite", suite)->check(CLI::IsMember({"canonical", "comparison", "regularity", "stability"}));
  v->add_option("-o,--output", out, "Output file (default stdout)");

  auto* o = app.add_subcommand("oracle", "Tabulate an exact solution");
  o->add_option("--variant", oa.variant)->check(CLI::IsMember({"transport", "relaxation", "barrier"}));
  o->add_option("--alpha", oa.alpha);
  o->add_option("--speed", oa.speed, "Transport speed c");
  o->add_option("--c0", oa.c0, "Relaxation initial value");
  o->add_option("-t,--time", oa.times, "Evaluation times");
  o->add_option("--n", oa.n, "Spatial samples on [0, 1)");
  o->add_option("--profile", oa.profile, "sine or cosine");
  o->add_option("--from", oa.from);
  o->add_option("--to", oa.to);
  o->add_option("--step", oa.step);
  o->add_option("-c,--config", oa.config, "Config (barrier variant)");
  o->add_option("-o,--output", oa.out, "Output file (default stdout)");

  auto* r = app.add_subcommand("refine", "Refinement study against an exact solution");
  r->add_option("-c,--config", config, "JSON config")->required();
  r->add_option("--levels", levels)->check(CLI::Range(2, 12));
  r->add_option("-o,--output", out, "Output file (default stdout)");

  auto* t = app.add_subcommand("specialfun-table", "Tabulate a special function");
  t->add_option("--fn", fn);
  t->add_option("--alpha", alpha);
  t->add_option("--beta", beta, "Exponent for power_caputo");
  t->add_option("--from", from);
  t->add_option("--to", to);
  t->add_option("--step", step);
  t->add_option("-o,--output", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::config);
  }

  try {
    if (s->parsed()) return cmd_solve(config, out, format, plot_data);
    if (v->parsed()) return cmd_verify(config, suite, out);
    if (o->parsed()) return cmd_oracle(oa);
    if (r->parsed()) return cmd_refine(config, levels, out);
    if (t->parsed()) return cmd_table(fn, alpha, from, to, step, beta, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  } catch (const Error& e) {
    std::cerr << to_string(e.code()) << ": " << e.what() << '\n';
    return code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::failure);
  }
  return static_cast<int>(ExitCode::failure);
}

}  // namespace fhj::cli
