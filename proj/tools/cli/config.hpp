#pragma once

// Experiment configuration: a key = value text file plus command-line
// overrides. Flags win over file entries.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fpchain::cli {

inline const std::vector<std::string> commands = {"cell",    "chain", "bands",
                                                  "hartman", "delay", "packet"};

// Validation failure tied to a field and where its value came from
// ("run.cfg:4", "--k-min", or "default").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, std::string origin, const std::string& message)
      : std::runtime_error(format(field, origin, message)),
        field_(std::move(field)),
        origin_(std::move(origin)) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& origin() const noexcept { return origin_; }

 private:
  static std::string format(const std::string& field, const std::string& origin,
                            const std::string& message);
  std::string field_;
  std::string origin_;
};

struct Setting {
  std::string value;
  std::string origin;
};

// Raw key -> value, before typing and validation.
class Settings {
 public:
  // Parses "key = value" lines; '#' starts a comment. Unknown keys and
  // malformed lines raise ConfigError with the line number.
  static Settings parse(std::string_view text, const std::string& source_name);

  void set(const std::string& key, std::string value, std::string origin);
  void merge_over(const Settings& overrides);

  const Setting* find(const std::string& key) const;
  const std::map<std::string, Setting>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, Setting> entries_;
};

// Keys accepted in config files; flags use the same names with '-' for '_'
// (N and N_max become --N and --N-max).
const std::vector<std::string>& known_keys();

struct KGrid {
  double k_min = 0.0;
  double k_max = 0.0;
  int count = 0;

  std::vector<double> points() const;
};

struct ExperimentConfig {
  std::string command;
  std::string cell;
  double period = 1.0;
  int n_cells = 1;
  int n_max = 32;
  int n_step = 1;
  std::optional<KGrid> grid;
  std::optional<double> k;
  double sigma = 0.02;
  int samples = 4001;
  double displacement = 0.0;
  std::string format = "csv";
  std::string out = "-";
  double tol_edge = 1e-9;
  double fd_step = 1e-4;

  // Resolved values echoed into output metadata, in a fixed order.
  using EchoValue = std::variant<long long, double, std::string>;
  std::vector<std::pair<std::string, EchoValue>> echo;
};

// Types and validates the settings for `command`. Throws ConfigError.
ExperimentConfig resolve(const std::string& command, const Settings& settings);

}  // namespace fpchain::cli
