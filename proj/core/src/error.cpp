#include "strichartz/error.hpp"

namespace strichartz {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NoCriticalAngle: return "NoCriticalAngle";
    case ErrorCode::DomainTouchesSingularity: return "DomainTouchesSingularity";
    case ErrorCode::DivergentAtOrigin: return "DivergentAtOrigin";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NyquistViolation: return "NyquistViolation";
    case ErrorCode::TimeWindowTooSmall: return "TimeWindowTooSmall";
  }
  return "Unknown";
}

}  // namespace strichartz
