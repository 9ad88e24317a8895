#pragma once

#include <stdexcept>
#include <string>

namespace floquet {

// Evaluation outside the domain of a Laurent polynomial (beta = 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Interpolation or eigen-decomposition that failed its residual check.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing/invalid model parameters or run options.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numeric procedure whose preconditions were not met by its inputs
// (e.g. a bracket that does not straddle a transition).
class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace floquet
