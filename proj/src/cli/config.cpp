#include "fhj/cli.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace fhj::cli {
namespace {

using json = nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown key");
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  return j;
}

double number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(join(path, key), "must be finite");
  return d;
}

long long integer(const json& obj, const std::string& key, const std::string& path,
                  long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v.get<long long>();
}

std::string string(const json& obj, const std::string& key, const std::string& path,
                   const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

HamiltonianConfig parse_hamiltonian(const json& j, const std::string& path) {
  require_object(j, path);
  HamiltonianConfig h;
  if (!j.contains("type")) throw ConfigError(join(path, "type"), "missing");
  h.type = string(j, "type", path, "");
  if (h.type == "zero") {
    reject_unknown(j, {"type"}, path);
  } else if (h.type == "constant") {
    reject_unknown(j, {"type", "value"}, path);
    h.value = number(j, "value", path, 0.0);
  } else if (h.type == "transport") {
    reject_unknown(j, {"type", "velocity"}, path);
    const std::string vpath = join(path, "velocity");
    if (!j.contains("velocity")) {
      h.velocity = {1.0};
    } else if (const json& v = j.at("velocity"); v.is_number()) {
      h.velocity = {v.get<double>()};
    } else if (v.is_array()) {
      if (v.empty() || v.size() > 2) throw ConfigError(vpath, "expected 1 or 2 components");
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (!v[k].is_number()) throw ConfigError(vpath + "[" + std::to_string(k) + "]", "expected a number");
        h.velocity.push_back(v[k].get<double>());
      }
    } else if (v.is_object()) {
      reject_unknown(v, {"mean", "amplitude", "wavenumber"}, vpath);
      h.sinusoidal = true;
      h.mean = number(v, "mean", vpath, 1.0);
      h.amplitude = number(v, "amplitude", vpath, 0.0);
      const long long k = integer(v, "wavenumber", vpath, 1);
      if (k < 0 || k > 1000) throw ConfigError(join(vpath, "wavenumber"), "must lie in [0, 1000]");
      h.wavenumber = static_cast<int>(k);
    } else {
      throw ConfigError(vpath, "expected a number, an array or {mean, amplitude, wavenumber}");
    }
  } else if (h.type == "eikonal") {
    reject_unknown(j, {"type", "speed", "lambda"}, path);
    h.speed = number(j, "speed", path, 1.0);
    if (h.speed < 0.0) throw ConfigError(join(path, "speed"), "must be >= 0");
    h.lambda = number(j, "lambda", path, 0.0);
  } else {
    throw ConfigError(join(path, "type"),
                      "unknown Hamiltonian '" + h.type + "' (zero, constant, transport, eikonal)");
  }
  return h;
}

InitialConfig parse_initial(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"type", "amplitude", "wavenumber", "offset"}, path);
  InitialConfig c;
  c.type = string(j, "type", path, "sine");
  if (c.type != "sine" && c.type != "cosine" && c.type != "constant")
    throw ConfigError(join(path, "type"), "unknown profile '" + c.type + "' (sine, cosine, constant)");
  c.amplitude = number(j, "amplitude", path, 1.0);
  const long long k = integer(j, "wavenumber", path, 1);
  if (k < 0 || k > 1000) throw ConfigError(join(path, "wavenumber"), "must lie in [0, 1000]");
  c.wavenumber = static_cast<int>(k);
  c.offset = number(j, "offset", path, 0.0);
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  require_object(j, "");
  reject_unknown(j, {"command", "alpha", "T", "n", "N", "dim", "cfl_safety", "viscosity_theta",
                     "stepping", "hamiltonian", "initial", "output", "seed"},
                 "");
  RunConfig c;
  c.command = string(j, "command", "", c.command);
  static const std::set<std::string> commands{"solve", "oracle", "verify", "refine", "specialfun-table"};
  if (!commands.count(c.command)) throw ConfigError("command", "unknown command '" + c.command + "'");

  c.alpha = number(j, "alpha", "", c.alpha);
  try {
    FractionalOrder check(c.alpha);
  } catch (const Error& e) {
    throw ConfigError("alpha", e.what());
  }
  c.horizon = number(j, "T", "", c.horizon);
  if (!(c.horizon > 0.0)) throw ConfigError("T", "must be > 0");
  const long long n = integer(j, "n", "", static_cast<long long>(c.n));
  if (n < 2 || n > (1 << 16)) throw ConfigError("n", "must lie in [2, 65536]");
  c.n = static_cast<std::size_t>(n);
  const long long steps = integer(j, "N", "", static_cast<long long>(c.steps));
  if (steps < 1 || steps > (1 << 20)) throw ConfigError("N", "must lie in [1, 1048576]");
  c.steps = static_cast<std::size_t>(steps);
  const long long dim = integer(j, "dim", "", c.dim);
  if (dim != 1 && dim != 2) throw ConfigError("dim", "must be 1 or 2");
  c.dim = static_cast<int>(dim);
  c.cfl_safety = number(j, "cfl_safety", "", c.cfl_safety);
  if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0)) throw ConfigError("cfl_safety", "must lie in (0, 1]");
  if (j.contains("viscosity_theta")) {
    c.viscosity_theta = number(j, "viscosity_theta", "", 0.0);
    if (*c.viscosity_theta < 0.0) throw ConfigError("viscosity_theta", "must be >= 0");
  }
  const std::string stepping = string(j, "stepping", "", "implicit");
  if (stepping == "implicit") c.stepping = Stepping::implicit;
  else if (stepping == "explicit") c.stepping = Stepping::explicit_;
  else throw ConfigError("stepping", "expected 'implicit' or 'explicit'");
  if (j.contains("hamiltonian")) c.hamiltonian = parse_hamiltonian(j.at("hamiltonian"), "hamiltonian");
  if (j.contains("initial")) c.initial = parse_initial(j.at("initial"), "initial");
  c.output_path = string(j, "output", "", "");
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (c.hamiltonian.type == "transport") {
    if (c.hamiltonian.sinusoidal && c.dim != 1)
      throw ConfigError("hamiltonian.velocity", "sinusoidal velocity is 1D only");
    if (!c.hamiltonian.sinusoidal && c.hamiltonian.velocity.size() != 1 &&
        static_cast<int>(c.hamiltonian.velocity.size()) != c.dim)
      throw ConfigError("hamiltonian.velocity", "needs " + std::to_string(c.dim) + " components");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot read config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["alpha"] = c.alpha;
  j["T"] = c.horizon;
  j["n"] = c.n;
  j["N"] = c.steps;
  j["dim"] = c.dim;
  j["cfl_safety"] = c.cfl_safety;
  if (c.viscosity_theta) j["viscosity_theta"] = *c.viscosity_theta;
  j["stepping"] = c.stepping == Stepping::implicit ? "implicit" : "explicit";
  json h;
  h["type"] = c.hamiltonian.type;
  if (c.hamiltonian.type == "constant") h["value"] = c.hamiltonian.value;
  if (c.hamiltonian.type == "transport") {
    if (c.hamiltonian.sinusoidal)
      h["velocity"] = {{"mean", c.hamiltonian.mean},
                       {"amplitude", c.hamiltonian.amplitude},
                       {"wavenumber", c.hamiltonian.wavenumber}};
    else
      h["velocity"] = c.hamiltonian.velocity;
  }
  if (c.hamiltonian.type == "eikonal") {
    h["speed"] = c.hamiltonian.speed;
    h["lambda"] = c.hamiltonian.lambda;
  }
  j["hamiltonian"] = h;
  j["initial"] = {{"type", c.initial.type},
                  {"amplitude", c.initial.amplitude},
                  {"wavenumber", c.initial.wavenumber},
                  {"offset", c.initial.offset}};
  j["seed"] = c.seed;
  return j.dump();
}

ProblemSpec build_problem(const RunConfig& c) {
  ProblemSpec p;
  p.alpha = FractionalOrder(c.alpha);
  p.time = TimeGrid(c.horizon, c.steps);
  p.space = TorusGrid(c.dim, c.n);
  p.cfl_safety = c.cfl_safety;
  p.viscosity_theta = c.viscosity_theta;
  p.stepping = c.stepping;

  const HamiltonianConfig& h = c.hamiltonian;
  if (h.type == "zero") {
    p.hamiltonian = hamiltonians::zero();
  } else if (h.type == "constant") {
    p.hamiltonian = hamiltonians::constant(h.value);
  } else if (h.type == "transport") {
    if (h.sinusoidal) {
      p.hamiltonian = hamiltonians::transport_sinusoidal(h.mean, h.amplitude, h.wavenumber, p.space,
                                                         c.horizon);
    } else {
      const double b0 = h.velocity[0];
      const double b1 = h.velocity.size() > 1 ? h.velocity[1] : (c.dim == 2 ? b0 : 0.0);
      p.hamiltonian = hamiltonians::transport_constant({b0, b1}, c.dim);
    }
  } else {
    const double s = h.speed;
    p.hamiltonian = hamiltonians::eikonal([s](std::span<const double>) { return s; }, s, 0.0, h.lambda);
  }

  const InitialConfig& ic = c.initial;
  const double w = 2.0 * std::numbers::pi * ic.wavenumber;
  SpaceFunction profile;
  if (ic.type == "constant") {
    profile = [off = ic.offset](std::span<const double>) { return off; };
  } else {
    const bool sine = ic.type == "sine";
    profile = [=, amp = ic.amplitude, off = ic.offset](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v;
      return off + amp * (sine ? std::sin(w * s) : std::cos(w * s));
    };
  }
  p.initial = GridFunction::sample(p.space, profile);
  p.initial_profile = std::move(profile);
  return p;
}

}  // namespace fhj::cli
