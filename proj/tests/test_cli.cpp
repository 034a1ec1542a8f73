#include "fhj/cli.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <sys/wait.h>

using namespace fhj;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  static std::atomic<int> counter{0};
  const fs::path p = fs::temp_directory_path() /
                     ("fhj_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(FHJ_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_field_of(const std::string& text) {
  try {
    cli::parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

const char* kSmall = R"({"alpha": 0.5, "T": 0.1, "n": 32, "N": 8,
  "hamiltonian": {"type": "transport", "velocity": 1.0}})";

}  // namespace

TEST_CASE("parse fills defaults") {
  const auto c = cli::parse_config(R"({"hamiltonian": {"type": "transport", "velocity": 1}})");
  CHECK(c.alpha == 0.5);
  CHECK(c.horizon == 0.5);
  CHECK(c.n == 256);
  CHECK(c.steps == 512);
  CHECK(c.cfl_safety == 0.9);
  CHECK(c.dim == 1);
  CHECK(c.stepping == Stepping::implicit);
  CHECK(c.hamiltonian.type == "transport");
  CHECK(c.initial.type == "sine");

  const auto p = cli::build_problem(c);
  CHECK(p.space.nodes_per_dim() == 256);
  CHECK(p.time.steps() == 512);
  CHECK(p.hamiltonian.lip_p_bound == 1.0);
  CHECK(p.initial_profile.has_value());

  // The normalized echo parses back to the same config.
  const auto again = cli::parse_config(cli::config_to_json(c));
  CHECK(cli::config_to_json(again) == cli::config_to_json(c));
}

TEST_CASE("parse errors name the field") {
  CHECK(config_field_of(R"({"alpha": 1.5})") == "alpha");
  CHECK(config_field_of(R"({"alpha": 0})") == "alpha");
  CHECK(config_field_of(R"({"alhpa": 0.5})") == "alhpa");
  CHECK(config_field_of(R"({"hamiltonian": {"type": "transport", "velocty": 1}})") == "hamiltonian.velocty");
  CHECK(config_field_of(R"({"hamiltonian": {"type": "magnetic"}})") == "hamiltonian.type");
  CHECK(config_field_of(R"({"n": -3})") == "n");
  CHECK(config_field_of(R"({"cfl_safety": 2})") == "cfl_safety");
  CHECK(config_field_of(R"({"initial": {"type": "sine", "amplitude": "big"}})") == "initial.amplitude");
  CHECK_THROWS_AS(cli::parse_config("{not json"), ConfigError);
}

TEST_CASE("parse does not judge the CFL condition") {
  const auto c = cli::parse_config(
      R"({"stepping": "explicit", "n": 256, "N": 16, "hamiltonian": {"type": "transport", "velocity": 1}})");
  const auto p = cli::build_problem(c);
  try {
    solve(p);
    FAIL("expected a CFL refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::cfl_violation);
  }
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 123456789.125})
    CHECK(std::strtod(cli::format_double(v).c_str(), nullptr) == v);
  CHECK(cli::format_double(0.5) == "0.5");
}

TEST_CASE("csv round trip and zero hamiltonian output") {
  const auto dir = scratch("csv");
  auto c = cli::parse_config(R"({"alpha": 0.3, "T": 0.2, "n": 16, "N": 10, "hamiltonian": {"type": "zero"}})");
  const auto p = cli::build_problem(c);
  const auto s = solve(p);
  cli::emit_result(s, c, dir, cli::Format::csv, true);
  const auto table = cli::read_csv(dir / "solution.csv");
  REQUIRE(table.header == std::vector<std::string>{"t", "x", "u"});
  REQUIRE(table.rows.size() == 11 * 16);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t n = r / 16, i = r % 16;
    CHECK(table.rows[r][0] == p.time.node(n));
    CHECK(table.rows[r][1] == p.space.point(i)[0]);
    CHECK(table.rows[r][2] == p.initial[i]);
  }
  CHECK(fs::exists(dir / "diagnostics.csv"));
  CHECK(fs::exists(dir / "slices" / "slice_00000.csv"));
  CHECK(fs::exists(dir / "slices" / "slice_00010.csv"));

  c = cli::parse_config(R"({"alpha": 0.7, "T": 0.2, "n": 16, "N": 10, "dim": 2,
                            "hamiltonian": {"type": "transport", "velocity": [1, -0.5]}})");
  const auto s2 = solve(cli::build_problem(c));
  const auto dir2 = scratch("csv2");
  cli::emit_result(s2, c, dir2, cli::Format::csv, false);
  const auto t2 = cli::read_csv(dir2 / "solution.csv");
  REQUIRE(t2.header == std::vector<std::string>{"t", "x", "y", "u"});
  for (std::size_t r = 0; r < t2.rows.size(); ++r) CHECK(t2.rows[r][3] == s2.trajectory[r / 256][r % 256]);
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("json output") {
  const auto dir = scratch("json");
  const auto c = cli::parse_config(kSmall);
  cli::emit_result(solve(cli::build_problem(c)), c, dir, cli::Format::json, false);
  const std::string text = read_file(dir / "solution.json");
  CHECK(text.find("\"config\"") != std::string::npos);
  CHECK(text.find("\"version\"") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("tool runs are deterministic and leave the config alone") {
  const auto dir = scratch("det");
  const auto cfg = dir / "config.json";
  write_file(cfg, kSmall);
  const std::string before = read_file(cfg);
  REQUIRE(run_tool("solve -c " + cfg.string() + " -o " + (dir / "a").string()) == 0);
  REQUIRE(run_tool("solve -c " + cfg.string() + " -o " + (dir / "b").string()) == 0);
  CHECK(read_file(dir / "a" / "solution.csv") == read_file(dir / "b" / "solution.csv"));
  CHECK(read_file(dir / "a" / "diagnostics.csv") == read_file(dir / "b" / "diagnostics.csv"));
  REQUIRE(run_tool("verify -c " + cfg.string() + " --suite comparison -o " + (dir / "v1.jsonl").string()) == 0);
  REQUIRE(run_tool("verify -c " + cfg.string() + " --suite comparison -o " + (dir / "v2.jsonl").string()) == 0);
  CHECK(read_file(dir / "v1.jsonl") == read_file(dir / "v2.jsonl"));
  CHECK(read_file(cfg) == before);
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  const auto ok = dir / "ok.json";
  write_file(ok, kSmall);
  CHECK(run_tool("--help") == 0);
  CHECK(run_tool("solve -c " + ok.string() + " -o " + (dir / "out").string()) == 0);
  CHECK(run_tool("refine -c " + ok.string() + " --levels 2") == 0);
  CHECK(run_tool("oracle --variant relaxation --alpha 0.5 -t 1") == 0);
  CHECK(run_tool("specialfun-table --fn mittag_leffler --alpha 0.5 --from -5 --to 0 --step 0.5") == 0);

  const auto bad_alpha = dir / "alpha.json";
  write_file(bad_alpha, R"({"alpha": 1.5})");
  CHECK(run_tool("solve -c " + bad_alpha.string()) == 2);
  CHECK(run_tool("solve -c " + (dir / "missing.json").string()) == 2);
  CHECK(run_tool("solve --no-such-flag") == 2);
  CHECK(run_tool("verify -c " + ok.string() + " --suite nonsense") == 2);

  const auto cfl = dir / "cfl.json";
  write_file(cfl, R"({"stepping": "explicit", "n": 256, "N": 16,
                      "hamiltonian": {"type": "transport", "velocity": 1}})");
  CHECK(run_tool("solve -c " + cfl.string() + " -o " + (dir / "cfl").string()) == 3);

  const auto nonmono = dir / "nonmono.json";
  write_file(nonmono, R"({"T": 0.2, "n": 32, "N": 16, "hamiltonian": {"type": "eikonal", "speed": 1, "lambda": -1}})");
  CHECK(run_tool("verify -c " + nonmono.string() + " --suite regularity") == 4);

  const auto blow = dir / "blow.json";
  write_file(blow, R"({"T": 1, "n": 16, "N": 64, "hamiltonian": {"type": "eikonal", "speed": 0, "lambda": -10000},
                       "initial": {"type": "constant", "offset": 1}})");
  CHECK(run_tool("solve -c " + blow.string() + " -o " + (dir / "blow").string()) == 5);
  fs::remove_all(dir);
}
