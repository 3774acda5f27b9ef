#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpround {

/// Vector or matrix sizes that do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid option combination (bad block layout, beta <= 0, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input violates an operation's precondition (point out of bounds,
/// infeasible fractional solution handed to a rounder, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Objective became non-finite during a coordinate descent solve.
class DivergedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Augmented Lagrangian rounds stopped reducing the residual.
class StalledError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every repetition of a randomized rounder failed.
class RoundingFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact reference solvers refuse instances beyond their enumeration budget.
class TooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact LP reference found the LP infeasible or unbounded.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lpround
