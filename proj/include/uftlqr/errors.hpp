#pragma once

#include <stdexcept>
#include <string>

namespace uftlqr {

enum class ErrorKind {
  Config,
  Io,
  QuadratureFailure,
  BranchCutViolation,
  InadmissibleContour,
  OverflowGuard,
  StepSizeUnderflow,
  NewtonDivergence,
  LinearSolveFailure,
  InsufficientStateResolution,
  GridMismatch,
  VerificationFailure,
};

const char* error_kind_name(ErrorKind kind);

// Process exit code used by the CLI for a given error kind.
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string field = {})
      : std::runtime_error(message), kind_(kind), field_(std::move(field)) {}

  ErrorKind kind() const { return kind_; }
  // Dotted config path for ConfigError, empty otherwise.
  const std::string& field() const { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

inline Error config_error(const std::string& field, const std::string& message) {
  return Error(ErrorKind::Config, field + ": " + message, field);
}

}  // namespace uftlqr
