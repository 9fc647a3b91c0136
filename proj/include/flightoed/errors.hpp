#pragma once

#include <stdexcept>
#include <string>

namespace flightoed {

// Bad input: out-of-range values, inconsistent dimensions, malformed files.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative method stopped without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrimOutOfRangeError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

// State where the equations of motion are singular (cos(beta) or cos(theta) ~ 0).
class SingularStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace flightoed
