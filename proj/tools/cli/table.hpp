#pragma once

#include <string>
#include <variant>
#include <vector>

#include "config.hpp"

namespace fpchain::cli {

// Empty cell (undefined phase, first-row increment, ...) is std::monostate.
using Value = std::variant<std::monostate, long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  void add_row(std::vector<Value> row);
};

// Doubles with 17 significant digits; fields quoted per RFC 4180 when needed.
std::string to_csv(const Table& table);

// {"meta": {"version", "config"}, "rows": [{column: value, ...}, ...]}
std::string to_json(const Table& table, const ExperimentConfig& cfg, const std::string& version);

std::string csv_field(const std::string& raw);
std::string format_double(double x);

}  // namespace fpchain::cli
