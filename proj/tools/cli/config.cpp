#include "config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <memory>

#include "fpchain/fpchain.h"

namespace fpchain::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool is_known(const std::string& key) {
  const auto& keys = known_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

// Typed access with the field/origin attached to every failure.
class Reader {
 public:
  Reader(const Settings& settings, ExperimentConfig& cfg) : settings_(settings), cfg_(cfg) {}

  bool has(const std::string& key) const { return settings_.find(key) != nullptr; }

  std::string origin(const std::string& key) const {
    const auto* s = settings_.find(key);
    return s ? s->origin : "default";
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(key, origin(key), msg);
  }

  double real(const std::string& key, double fallback) {
    const auto* s = settings_.find(key);
    double v = fallback;
    if (s) {
      errno = 0;
      char* end = nullptr;
      v = std::strtod(s->value.c_str(), &end);
      if (s->value.empty() || end != s->value.c_str() + s->value.size() || errno == ERANGE)
        fail(key, "expected a number, got '" + s->value + "'");
      if (!std::isfinite(v)) fail(key, "must be finite");
    }
    cfg_.echo.emplace_back(key, v);
    return v;
  }

  int integer(const std::string& key, int fallback) {
    const auto* s = settings_.find(key);
    long v = fallback;
    if (s) {
      errno = 0;
      char* end = nullptr;
      v = std::strtol(s->value.c_str(), &end, 10);
      if (s->value.empty() || end != s->value.c_str() + s->value.size() || errno == ERANGE ||
          v > 100000000 || v < -100000000)
        fail(key, "expected an integer, got '" + s->value + "'");
    }
    cfg_.echo.emplace_back(key, static_cast<long long>(v));
    return static_cast<int>(v);
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const auto* s = settings_.find(key);
    std::string v = s ? s->value : fallback;
    cfg_.echo.emplace_back(key, v);
    return v;
  }

  void require(const std::string& key, const std::string& why) const {
    if (!has(key)) {
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      throw ConfigError(key, "missing",
                        "required " + why + " (set '" + key + " = ...' in the config or pass --" +
                            flag + ")");
    }
  }

 private:
  const Settings& settings_;
  ExperimentConfig& cfg_;
};

struct CellDeleter {
  void operator()(fpc_cell* c) const { fpc_cell_destroy(c); }
};

}  // namespace

std::string ConfigError::format(const std::string& field, const std::string& origin,
                                const std::string& message) {
  return origin + ": field '" + field + "': " + message;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "scan",   "cell",    "period", "N",        "N_max",    "N_step",  "k_min",
      "k_max",  "k_count", "k",      "sigma",    "samples",  "displace", "format",
      "out",    "tol_edge", "fd_step"};
  return keys;
}

Settings Settings::parse(std::string_view text, const std::string& source_name) {
  Settings out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;

    const std::string where = source_name + ":" + std::to_string(line_no);
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("?", where, "expected 'key = value', got '" + stripped + "'");
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (!is_known(key)) throw ConfigError(key, where, "unknown key");
    if (out.find(key)) throw ConfigError(key, where, "duplicate key");
    out.set(key, value, where);
  }
  return out;
}

void Settings::set(const std::string& key, std::string value, std::string origin) {
  entries_[key] = {std::move(value), std::move(origin)};
}

void Settings::merge_over(const Settings& overrides) {
  for (const auto& [key, s] : overrides.entries_) entries_[key] = s;
}

const Setting* Settings::find(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<double> KGrid::points() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  const double h = (k_max - k_min) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = k_min + i * h;
  out.back() = k_max;
  return out;
}

ExperimentConfig resolve(const std::string& command, const Settings& settings) {
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw ConfigError("scan", "command line", "unknown scan type '" + command + "'");

  ExperimentConfig cfg;
  Reader rd(settings, cfg);
  cfg.command = command;
  cfg.echo.emplace_back("scan", command);

  rd.require("cell", "cell description");
  cfg.cell = rd.text("cell", "");
  fpc_cell* raw = nullptr;
  if (fpc_cell_parse(cfg.cell.c_str(), &raw) != FPC_OK) rd.fail("cell", fpc_last_error());
  const std::unique_ptr<fpc_cell, CellDeleter> cell(raw);
  double support = 0.0;
  fpc_cell_support_width(cell.get(), &support);

  cfg.period = rd.real("period", 1.0);
  if (!(cfg.period > 0.0)) rd.fail("period", "must be > 0");
  if (cfg.period < support)
    rd.fail("period", "must be >= the cell support width (" + std::to_string(support) + ")");

  const bool fixed_k_chain = command == "chain" && rd.has("k");
  const bool needs_grid = command == "cell" || command == "bands" || command == "delay" ||
                          (command == "chain" && !fixed_k_chain);
  const bool needs_k = command == "hartman" || command == "packet" || fixed_k_chain;
  const bool needs_n = command == "delay" || (command == "chain" && !fixed_k_chain);
  const bool needs_n_max = command == "bands" || command == "hartman" || command == "packet" ||
                           fixed_k_chain;

  if (needs_grid) {
    rd.require("k_min", "k-grid lower end");
    rd.require("k_max", "k-grid upper end");
    rd.require("k_count", "k-grid point count");
    KGrid g;
    g.k_min = rd.real("k_min", 0.0);
    g.k_max = rd.real("k_max", 0.0);
    g.count = rd.integer("k_count", 0);
    if (!(g.k_min > 0.0)) rd.fail("k_min", "must be > 0");
    if (g.count < 2) rd.fail("k_count", "must be >= 2");
    if (!(g.k_max > g.k_min)) rd.fail("k_max", "must be > k_min");
    cfg.grid = g;
  }
  if (needs_k) {
    rd.require("k", "fixed wave number");
    cfg.k = rd.real("k", 0.0);
    if (!(*cfg.k > 0.0)) rd.fail("k", "must be > 0");
  }
  if (needs_n) {
    cfg.n_cells = rd.integer("N", 1);
    if (cfg.n_cells < 1) rd.fail("N", "must be >= 1");
  }
  if (needs_n_max) {
    cfg.n_max = rd.integer("N_max", 32);
    if (cfg.n_max < 1) rd.fail("N_max", "must be >= 1");
  }
  if (command == "packet") {
    cfg.sigma = rd.real("sigma", 0.02);
    if (!(cfg.sigma > 0.0)) rd.fail("sigma", "must be > 0");
    if (!(*cfg.k - 5.0 * cfg.sigma > 0.0)) rd.fail("sigma", "packet window k - 5 sigma must be > 0");
    cfg.samples = rd.integer("samples", 4001);
    if (cfg.samples < 3) rd.fail("samples", "must be >= 3");
    cfg.n_step = rd.integer("N_step", 1);
    if (cfg.n_step < 1) rd.fail("N_step", "must be >= 1");
  }
  if (command == "delay") {
    cfg.displacement = rd.real("displace", 0.0);
  }
  if (command == "delay" || command == "hartman") {
    cfg.fd_step = rd.real("fd_step", 1e-4);
    if (!(cfg.fd_step > 0.0)) rd.fail("fd_step", "must be > 0");
    if (cfg.grid && !(cfg.grid->k_min - 2.0 * cfg.fd_step > 0.0))
      rd.fail("fd_step", "stencil k_min - 2 fd_step must stay > 0");
    if (cfg.k && !(*cfg.k - 2.0 * cfg.fd_step > 0.0))
      rd.fail("fd_step", "stencil k - 2 fd_step must stay > 0");
  }
  if (command == "bands" || command == "hartman") {
    cfg.tol_edge = rd.real("tol_edge", 1e-9);
    if (!(cfg.tol_edge > 0.0)) rd.fail("tol_edge", "must be > 0");
  }
  cfg.format = rd.text("format", "csv");
  if (cfg.format != "csv" && cfg.format != "json") rd.fail("format", "must be csv or json");
  // Output path is not echoed: the same run written to two places stays byte-identical.
  if (const auto* o = settings.find("out")) cfg.out = o->value;
  if (cfg.out.empty()) throw ConfigError("out", rd.origin("out"), "must not be empty (use - for stdout)");
  return cfg;
}

}  // namespace fpchain::cli
