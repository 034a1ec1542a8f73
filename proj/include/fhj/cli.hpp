#pragma once

// Batch front end: JSON run configs, result serialization and the `fhj`
// command dispatcher.

#include "fhj/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fhj::cli {

enum class ExitCode : int {
  ok = 0,
  failure = 1,
  config = 2,
  cfl = 3,
  check_failed = 4,
  blow_up = 5,
};

struct HamiltonianConfig {
  std::string type = "zero";  // zero | constant | transport | eikonal
  double value = 0.0;         // constant
  // transport: constant velocity, or b(x) = mean + amplitude sin(2 pi k x) in 1D
  std::vector<double> velocity;
  bool sinusoidal = false;
  double mean = 1.0;
  double amplitude = 0.0;
  int wavenumber = 1;
  // eikonal
  double speed = 1.0;
  double lambda = 0.0;
};

struct InitialConfig {
  std::string type = "sine";  // sine | cosine | constant
  double amplitude = 1.0;
  int wavenumber = 1;
  double offset = 0.0;
};

struct RunConfig {
  std::string command = "solve";
  double alpha = 0.5;
  double horizon = 0.5;
  std::size_t n = 256;
  std::size_t steps = 512;
  int dim = 1;
  double cfl_safety = 0.9;
  std::optional<double> viscosity_theta;
  Stepping stepping = Stepping::implicit;
  HamiltonianConfig hamiltonian;
  InitialConfig initial;
  std::string output_path;
  std::uint64_t seed = 0;
};

/// Parses and validates a JSON config; unknown keys and out-of-range values
/// throw ConfigError naming the field path. Does not check the CFL condition.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Normalized JSON echo of a config with all defaults filled in.
std::string config_to_json(const RunConfig& cfg);

ProblemSpec build_problem(const RunConfig& cfg);

/// Shortest round-trip decimal form.
std::string format_double(double v);

enum class Format { csv, json };

/// Writes solution.csv or solution.json plus diagnostics.csv into `dir`;
/// plot_data adds slices/slice_NNNNN.csv, one per time node.
void emit_result(const SolveResult& result, const RunConfig& cfg, const std::filesystem::path& dir,
                 Format format, bool plot_data);

/// CSV body: header t,x[,y],u and one row per space-time node, time-major.
void write_solution_csv(std::ostream& os, const SolveResult& result);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace fhj::cli
