#pragma once

#include <stdexcept>

namespace inrfort {

// Error categories mirroring the CLI exit codes: config -> 1, io -> 2,
// numeric -> 3. Anything else escaping to main is treated as a config error.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace inrfort
