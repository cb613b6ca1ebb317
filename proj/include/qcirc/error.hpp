#pragma once

#include <stdexcept>
#include <string>

namespace qcirc {

/// Error categories surfaced by library operations. The CLI maps these to
/// machine-readable error objects and exit code 2.
enum class ErrorCode {
  InvalidParams,
  InvalidCount,
  InvalidWeight,
  InvalidSpec,
  UndefinedDirection,
  DegenerateUniform,
  NotAMeasure,
  NotRepresentableAsQC,
  EmptySample,
  TooFewObservations,
  Unfittable,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidCount: return "InvalidCount";
    case ErrorCode::InvalidWeight: return "InvalidWeight";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::UndefinedDirection: return "UndefinedDirection";
    case ErrorCode::DegenerateUniform: return "DegenerateUniform";
    case ErrorCode::NotAMeasure: return "NotAMeasure";
    case ErrorCode::NotRepresentableAsQC: return "NotRepresentableAsQC";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::TooFewObservations: return "TooFewObservations";
    case ErrorCode::Unfittable: return "Unfittable";
  }
  return "UnknownError";
}

class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qcirc
