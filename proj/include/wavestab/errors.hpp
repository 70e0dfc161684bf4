#pragma once

#include <stdexcept>
#include <string>

namespace wavestab {

// Machine-readable failure codes; the CLI maps them into error JSON.
enum class ErrorCode {
  EmptyCoefficients,
  KappaNotPositive,
  OrderTooHigh,
  NonpositiveRho,
  NoWellFound,
  DegenerateWell,
  NoDualPoint,
  QuadratureNotConverged,
  BoundaryTooClose,
  NoiseFloor,
  ZeroPeriodDerivative,
  ModelRangeExceeded,
  IntegratorFailed,
  RootOnContour,
  DiskCaptureFailed,
  SingularityNotSpurious,
  SingularHessian,
  NotAMinimum,
  NoSolitaryWave,
  VanishingModulus,
  ConfigError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Saddle endstate where a minimum was required; carries the offending
// second derivative of the effective potential for diagnostics.
class NotAMinimumError : public Error {
 public:
  NotAMinimumError(double d2, const std::string& msg)
      : Error(ErrorCode::NotAMinimum, msg), second_derivative(d2) {}

  double second_derivative;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace wavestab
