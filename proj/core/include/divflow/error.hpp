#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace divflow {

enum class ErrorCode {
  InvalidArgument,
  TooLarge,
  PreconditionViolated,
  StructureViolation,
  ConfigInvalid,
  NonConverged,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::TooLarge: return "TOO_LARGE";
    case ErrorCode::PreconditionViolated: return "PRECONDITION_VIOLATED";
    case ErrorCode::StructureViolation: return "STRUCTURE_VIOLATION";
    case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::NonConverged: return "NON_CONVERGED";
    case ErrorCode::Io: return "IO_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace divflow
