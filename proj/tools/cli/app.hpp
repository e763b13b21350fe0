#pragma once

#include <ostream>

namespace fpchain::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_config_error = 2,
  exit_contract_violation = 3,
};

// Whole command-line program; output that is not written to --out goes to `out`.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fpchain::cli
