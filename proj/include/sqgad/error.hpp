#pragma once

#include <stdexcept>
#include <string>

namespace sqgad {

// Numeric values are part of the C ABI (see sqgad.h); append only.
enum class ErrorCode : int {
  InvalidArgument = 1,
  PreconditionViolated = 2,
  SingularSymbol = 3,
  EmptyBand = 4,
  NonFinite = 5,
  QuadratureNoConvergence = 6,
  ZeroField = 7,
  DegenerateSystem = 8,
  HypothesisViolated = 9,
  InsufficientSamples = 10,
  NonPositiveValue = 11,
  Io = 12,
  Config = 13,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the time integrator when a coefficient stops being finite.
class NonFiniteError : public Error {
 public:
  NonFiniteError(double time, const std::string& what)
      : Error(ErrorCode::NonFinite, what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

// Raised by adaptive quadrature; carries the error estimate that was reached.
class QuadratureError : public Error {
 public:
  QuadratureError(double value, double estimate, const std::string& what)
      : Error(ErrorCode::QuadratureNoConvergence, what),
        value_(value),
        estimate_(estimate) {}
  double value() const noexcept { return value_; }
  double estimate() const noexcept { return estimate_; }

 private:
  double value_;
  double estimate_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace sqgad
