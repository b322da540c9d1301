#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace strichartz {

enum class ErrorCode {
  InvalidArgument,
  NonConvergence,
  NoCriticalAngle,
  DomainTouchesSingularity,
  DivergentAtOrigin,
  InsufficientData,
  NyquistViolation,
  TimeWindowTooSmall,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code carries the failure kind.
class ProbeError : public std::runtime_error {
 public:
  ProbeError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw ProbeError(code, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace strichartz
