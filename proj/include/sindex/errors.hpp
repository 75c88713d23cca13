#pragma once

#include <stdexcept>
#include <string>

namespace sindex {

// Bad user input: config files, CLI arguments, malformed shapes.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical procedure failed (divergence, non-finite values, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergenceError : NumericError {
  DivergenceError(const std::string& what, int iter)
      : NumericError(what), iteration(iter) {}
  int iteration;
};

// Requested an operation that has no registered implementation for the
// given link/regularizer.
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sindex
