#pragma once

#include <stdexcept>
#include <string>

namespace lpfix {

/// Precondition failure on the caller's side (NaN input, zero vector where a
/// direction is required, malformed parameters).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public ContractViolation {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : ContractViolation("dimension mismatch: expected " + std::to_string(expected) +
                          ", got " + std::to_string(got)) {}
};

/// Base of all run-time failures reported by the solvers and oracles.
class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The oracle answered with a point outside [0,1]^d.
class MalformedOracle : public SolveError {
 public:
  using SolveError::SolveError;
};

class NonContractionSuspected : public SolveError {
 public:
  using SolveError::SolveError;
};

class OffGridQuery : public SolveError {
 public:
  using SolveError::SolveError;
};

class ResolutionTooCoarse : public SolveError {
 public:
  using SolveError::SolveError;
};

/// Explicit grid enumeration would exceed the point cap.
class GridTooLarge : public SolveError {
 public:
  using SolveError::SolveError;
};

}  // namespace lpfix
