#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsle {

enum class ErrorCode {
  InvalidArgument,
  NonOrderedConfiguration,
  NonPositive,
  StepFailure,
  UnsupportedBeta,
  NegativeNu,
  EmptySample,
  PoleHit,
  GridExceeded,
  CoincidentPoints,
  SwallowedProbe,
  MeshTooCoarse,
  SupportOutsideBox,
  DomainViolation,
  InsufficientSurvivors,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as an lsle::Error carrying a code, so
// callers (the CLI in particular) can map failures without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonOrderedConfiguration: return "NonOrderedConfiguration";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::UnsupportedBeta: return "UnsupportedBeta";
    case ErrorCode::NegativeNu: return "NegativeNu";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::GridExceeded: return "GridExceeded";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::SwallowedProbe: return "SwallowedProbe";
    case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorCode::SupportOutsideBox: return "SupportOutsideBox";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::InsufficientSurvivors: return "InsufficientSurvivors";
  }
  return "Unknown";
}

}  // namespace lsle
