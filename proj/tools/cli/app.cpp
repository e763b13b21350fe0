#include "app.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "fpchain/fpchain.h"
#include "table.hpp"

namespace fpchain::cli {

namespace {

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr FlagSpec flag_specs[] = {
    {"--out", "out", "output path (- for stdout)"},
    {"--format", "format", "csv | json"},
    {"--cell", "cell", "delta:g=G | barrier:V0=V,w=W | piecewise:w1:V1,w2:V2,..."},
    {"--period", "period", "lattice period a"},
    {"--N", "N", "cell count"},
    {"--N-max", "N_max", "largest cell count in per-N scans"},
    {"--N-step", "N_step", "stride of per-N rows (packet)"},
    {"--k-min", "k_min", "k-grid lower end"},
    {"--k-max", "k_max", "k-grid upper end"},
    {"--k-count", "k_count", "k-grid point count"},
    {"--k", "k", "fixed wave number (chain per-N, hartman, packet centre)"},
    {"--sigma", "sigma", "Gaussian packet width in k"},
    {"--samples", "samples", "quadrature samples across the packet window"},
    {"--displace", "displace", "rigid displacement of a second system (delay)"},
    {"--tol-edge", "tol_edge", "band-edge tolerance on |z| - 1"},
    {"--fd-step", "fd_step", "finite-difference k step"},
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattering by finite chains of identical, equally spaced 1D cells"};
  app.set_version_flag("--version", fpc_version());
  app.require_subcommand(1);

  std::string config_path;
  Settings flags;
  std::string command;

  const std::pair<const char*, const char*> subcommands[] = {
      {"cell", "single-cell amplitudes on a k-grid"},
      {"chain", "N-cell amplitudes: recurrence vs Chebyshev (per-k, or per-N with --k)"},
      {"bands", "Bloch parameter z and Band/Gap/Edge verdicts on a k-grid"},
      {"hartman", "transmission delay and traversal time versus N at fixed k"},
      {"delay", "phase time-delays on a k-grid, optionally against a displaced copy"},
      {"packet", "Gaussian wave-packet averaged transmission versus N"},
  };
  for (const auto& [name, help] : subcommands) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&command, n = std::string(name)] { command = n; });
    sub->add_option("--config", config_path, "key = value experiment config file");
    for (const auto& spec : flag_specs) {
      sub->add_option_function<std::string>(
          spec.flag,
          [&flags, spec](const std::string& v) { flags.set(spec.key, v, spec.flag); }, spec.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << fpc_version() << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_config_error;
  }

  ExperimentConfig cfg;
  try {
    Settings settings;
    if (!config_path.empty()) settings = Settings::parse(read_file(config_path), config_path);
    settings.merge_over(flags);
    cfg = resolve(command, settings);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  }

  RunResult result;
  try {
    result = run(cfg);
  } catch (const ComputationError& e) {
    err << (e.invalid_argument() ? "config error: " : "numerical error: ") << e.what() << "\n";
    return e.invalid_argument() ? exit_config_error : exit_contract_violation;
  }

  const std::string text =
      cfg.format == "json" ? to_json(result.table, cfg, fpc_version()) : to_csv(result.table);
  if (cfg.out == "-") {
    out << text;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file || !(file << text)) {
      err << "config error: " << cfg.out << ": field 'out': cannot write output file\n";
      return exit_config_error;
    }
  }

  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  if (!result.violations.empty()) {
    for (const auto& v : result.violations) err << "contract violation: " << v << "\n";
    return exit_contract_violation;
  }
  return exit_ok;
}

}  // namespace fpchain::cli
