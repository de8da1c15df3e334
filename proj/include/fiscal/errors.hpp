#pragma once

#include <stdexcept>
#include <string>

namespace fiscal {

// Error taxonomy mirrors the CLI exit codes: config/usage -> 1,
// data/ingestion -> 2, numerical failure -> 3.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fiscal
