#pragma once

#include <stdexcept>
#include <string>

namespace fpchain {

enum class ErrorKind {
  invalid_argument,
  undefined_phase,
  ambiguous_branch,
  singular_conversion,
  resonance_divergence,
  grid,
  coverage,
  band,
};

// Single exception type for the library; `kind` is what the C boundary maps
// onto status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fpchain
