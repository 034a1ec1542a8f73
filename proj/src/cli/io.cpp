#include "fhj/cli.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fhj::cli {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  return out;
}

void write_coords(std::ostream& os, const TorusGrid& grid, std::size_t i) {
  const auto x = grid.point(i);
  os << format_double(x[0]);
  if (grid.dim() == 2) os << ',' << format_double(x[1]);
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_solution_csv(std::ostream& os, const SolveResult& r) {
  os << (r.space.dim() == 2 ? "t,x,y,u\n" : "t,x,u\n");
  for (std::size_t n = 0; n < r.trajectory.size(); ++n) {
    const std::string t = format_double(r.time.node(n));
    const GridFunction& g = r.trajectory[n];
    for (std::size_t i = 0; i < g.size(); ++i) {
      os << t << ',';
      write_coords(os, r.space, i);
      os << ',' << format_double(g[i]) << '\n';
    }
  }
}

void emit_result(const SolveResult& r, const RunConfig& cfg, const std::filesystem::path& dir,
                 Format format, bool plot_data) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());

  if (format == Format::csv) {
    const auto path = dir / "solution.csv";
    auto out = open_out(path);
    write_solution_csv(out, r);
    finish(out, path);
  } else {
    using json = nlohmann::json;
    json j;
    j["metadata"] = {{"config", json::parse(config_to_json(cfg))},
                     {"version", FHJ_VERSION},
                     {"format", "fhj-solution-1"}};
    json t = json::array(), x = json::array(), u = json::array();
    for (std::size_t n = 0; n < r.trajectory.size(); ++n) t.push_back(r.time.node(n));
    for (std::size_t i = 0; i < r.space.size(); ++i) {
      const auto p = r.space.point(i);
      if (r.space.dim() == 2) x.push_back({p[0], p[1]});
      else x.push_back(p[0]);
    }
    for (const auto& g : r.trajectory) u.push_back(std::vector<double>(g.values().begin(), g.values().end()));
    j["t"] = std::move(t);
    j["x"] = std::move(x);
    j["u"] = std::move(u);
    const auto path = dir / "solution.json";
    auto out = open_out(path);
    out << j.dump() << '\n';
    finish(out, path);
  }

  {
    const auto path = dir / "diagnostics.csv";
    auto out = open_out(path);
    out << "step,t,max,min,cfl_margin,iterations,history_size\n";
    for (std::size_t k = 0; k < r.diagnostics.size(); ++k) {
      const StepDiagnostics& d = r.diagnostics[k];
      out << k + 1 << ',' << format_double(r.time.node(k + 1)) << ',' << format_double(d.max) << ','
          << format_double(d.min) << ',' << format_double(d.cfl_margin) << ',' << d.iterations
          << ',' << d.history_size << '\n';
    }
    finish(out, path);
  }

  if (plot_data) {
    const auto slices = dir / "slices";
    std::filesystem::create_directories(slices, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create " + slices.string() + ": " + ec.message());
    for (std::size_t n = 0; n < r.trajectory.size(); ++n) {
      char name[32];
      std::snprintf(name, sizeof name, "slice_%05zu.csv", n);
      const auto path = slices / name;
      auto out = open_out(path);
      out << "# t=" << format_double(r.time.node(n)) << '\n';
      out << (r.space.dim() == 2 ? "x,y,u\n" : "x,u\n");
      const GridFunction& g = r.trajectory[n];
      for (std::size_t i = 0; i < g.size(); ++i) {
        write_coords(out, r.space, i);
        out << ',' << format_double(g[i]) << '\n';
      }
      finish(out, path);
    }
  }
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path.string());
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size())
      throw Error(ErrorCode::io, path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    std::vector<double> row(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const char* b = cells[k].data();
      const char* e = b + cells[k].size();
      const auto res = std::from_chars(b, e, row[k]);
      if (res.ec != std::errc() || res.ptr != e)
        throw Error(ErrorCode::io, path.string() + ":" + std::to_string(lineno) + ": bad number '" +
                                       cells[k] + "'");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace fhj::cli
