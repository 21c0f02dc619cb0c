#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace robtrade {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes disagree with the model or with each other.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite input where a finite value is required.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument value (empty dataset, unsupported norm, bad fraction, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The input gradient vanished where a direction was required.
class DegenerateGradientError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition (stationarity, realizability, ...) does not hold.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double measured)
      : Error(what), measured_(measured) {}
  explicit PreconditionError(const std::string& what) : Error(what) {}

  /// Offending quantity, e.g. the gradient sup-norm for a stationarity failure.
  double measured() const noexcept { return measured_; }

 private:
  double measured_ = 0.0;
};

/// Stationarity check on a supposed minimizer failed.
class StationarityError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class SingularHessianError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Outer optimizer diverged (non-finite objective).
class OptimizationError : public Error {
 public:
  using Error::Error;
};

/// Problem size exceeds what an exhaustive oracle will enumerate.
class RefusalError : public Error {
 public:
  using Error::Error;
};

class ConstructionImpossibleError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace robtrade
