#pragma once

#include <stdexcept>
#include <string>

namespace febb {

/// Input that violates a precondition (bad order, inadmissible grid, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed configuration or data file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The linear algebra could not produce a trustworthy answer.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace febb
