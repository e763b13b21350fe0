#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "table.hpp"

namespace fpchain::cli {

inline constexpr double unitarity_threshold = 1e-10;
inline constexpr double dual_path_threshold = 1e-10;

// A C API call failed. `invalid_argument` distinguishes bad inputs that slipped
// past config validation from numerical failures.
class ComputationError : public std::runtime_error {
 public:
  ComputationError(const std::string& what, bool invalid_argument)
      : std::runtime_error(what), invalid_argument_(invalid_argument) {}
  bool invalid_argument() const noexcept { return invalid_argument_; }

 private:
  bool invalid_argument_;
};

struct RunResult {
  Table table;
  std::vector<std::string> violations;  // numerical-contract breaches
  std::vector<std::string> warnings;
};

RunResult run(const ExperimentConfig& cfg);

}  // namespace fpchain::cli
