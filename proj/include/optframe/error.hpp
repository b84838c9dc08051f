#pragma once

#include <stdexcept>
#include <string>

namespace optframe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user data: NaN, negative weights, unsorted where sorted is required.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class RangeError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class TraceMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A scalar function was evaluated outside its domain (e.g. 1/x at 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Prescribed norms are not majorized by the prescribed spectrum.
class InfeasibleDesign : public Error {
 public:
  using Error::Error;
};

/// Signals a bug: a proven invariant of the construction failed numerically.
class InternalInvariantViolation : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public InternalInvariantViolation {
 public:
  using InternalInvariantViolation::InternalInvariantViolation;
};

class StructureError : public InternalInvariantViolation {
 public:
  using InternalInvariantViolation::InternalInvariantViolation;
};

}  // namespace optframe
