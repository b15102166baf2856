#pragma once

#include <stdexcept>
#include <string>

namespace nanospin {

// Invalid user input or configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Separation too small for the point-dipole approximation.
class DistanceError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Integration cutoff leaves a non-negligible tail.
class TailError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Direct torque evaluation requested where binary64 cancellation swamps the result.
class RegimeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Numerical failure: quadrature or time stepping did not converge. Exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lo = 0.0, double hi = 0.0)
      : std::runtime_error(what), lo_(lo), hi_(hi) {}

  // Bounds of the worst panel (or time interval) at the point of failure.
  double lower() const noexcept { return lo_; }
  double upper() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

// Evaluation at a pole of a thermal factor (omega == 0 with T > 0).
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// File system failure while writing artifacts. Exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nanospin
