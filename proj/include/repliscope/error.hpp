#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace repliscope {

enum class ErrorCode {
  InvalidProbability,
  SharesDontSum,
  EmptyTarget,
  InvalidParameter,
  MassBlowup,
  NoConvergence,
  NotFullComm,
  DifferentialPower,
  RadicandNonpositive,
  AllSuppressed,
  PreconditionViolated,
  BoundsMismatch,
  EmptyTally,
  KindExtinct,
  WindowEmpty,
  StepTooLarge,
  ConfigError,
  IoFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI, the Python module) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace repliscope
