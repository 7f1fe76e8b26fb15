#pragma once

#include <stdexcept>
#include <string>

namespace subbag {

// Error categories mapped to CLI exit codes (see tools/main.cpp):
// ConfigError -> 2, DataError -> 3, NumericalError -> 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace subbag
