#pragma once

#include <stdexcept>
#include <string>

namespace sbp_time {

enum class ErrorKind {
  InvalidArgument,
  SingularMatrix,
  ResidualTooLarge,
  ConvergenceFailure,
  TooFewNodes,
  NotNullspaceConsistent,
  UnknownName,
  PoleAtZ,
  SingularStageSystem,
  NewtonDiverged,
  ParseError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::TooFewNodes: return "TooFewNodes";
    case ErrorKind::NotNullspaceConsistent: return "NotNullspaceConsistent";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::PoleAtZ: return "PoleAtZ";
    case ErrorKind::SingularStageSystem: return "SingularStageSystem";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` tells callers what failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace sbp_time
