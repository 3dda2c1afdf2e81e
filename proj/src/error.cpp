#include "squeeze/error.hpp"

namespace squeeze {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::PhiOutOfRange: return "PhiOutOfRange";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::NegativeOccupation: return "NegativeOccupation";
    case ErrorCode::UnstableRegime: return "UnstableRegime";
    case ErrorCode::NonFiniteResult: return "NonFiniteResult";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::OutOfRegime: return "OutOfRegime";
    case ErrorCode::DegenerateBranch: return "DegenerateBranch";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::FitFailed: return "FitFailed";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
      code_(code),
      detail_(std::move(detail)) {}

}  // namespace squeeze
