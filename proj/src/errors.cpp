#include "uftlqr/errors.hpp"

namespace uftlqr {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::BranchCutViolation: return "BranchCutViolation";
    case ErrorKind::InadmissibleContour: return "InadmissibleContour";
    case ErrorKind::OverflowGuard: return "OverflowGuard";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorKind::InsufficientStateResolution: return "InsufficientStateResolution";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::VerificationFailure: return "VerificationFailure";
  }
  return "Error";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Io:
      return 2;
    case ErrorKind::VerificationFailure:
      return 4;
    default:
      return 3;
  }
}

}  // namespace uftlqr
