#pragma once

#include <stdexcept>
#include <string>

namespace levy {

/// Argument outside the mathematical domain of an operation (negative theta,
/// kappa <= 0, wrong regime, x = 0 for unbounded variation, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its tolerance. The message carries
/// the diagnostics (bracket, achieved residual, error estimate).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (model files, CLI arguments).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed request the library deliberately does not handle.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levy
