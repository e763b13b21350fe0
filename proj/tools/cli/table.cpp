#include "table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace fpchain::cli {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

nlohmann::ordered_json to_json_value(const Value& v) {
  return std::visit(overloaded{
                        [](std::monostate) { return nlohmann::ordered_json(nullptr); },
                        [](long long i) { return nlohmann::ordered_json(i); },
                        [](double d) {
                          return std::isfinite(d) ? nlohmann::ordered_json(d)
                                                  : nlohmann::ordered_json(nullptr);
                        },
                        [](const std::string& s) { return nlohmann::ordered_json(s); },
                    },
                    v);
}

}  // namespace

void Table::add_row(std::vector<Value> row) {
  if (row.size() != columns.size())
    throw std::logic_error("table row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += std::visit(overloaded{
                            [](std::monostate) { return std::string(); },
                            [](long long v) { return std::to_string(v); },
                            [](double v) { return format_double(v); },
                            [](const std::string& s) { return csv_field(s); },
                        },
                        row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table, const ExperimentConfig& cfg, const std::string& version) {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : cfg.echo)
    config[key] = std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, value);

  nlohmann::ordered_json doc;
  doc["meta"] = {{"version", version}, {"config", config}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = to_json_value(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace fpchain::cli
