#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kobayashi {

enum class ErrorCode {
  NotInterior,
  ZeroDirection,
  NotBoundary,
  NonSmoothVertex,
  OutOfDomain,
  DomainError,
  GridError,
  DegenerateRays,
  NormalizationError,
  EmptyClip,
  DegenerateClosestPoint,
  HypothesisError,
  NormalUndefined,
  NotTangential,
  UnboundedDomain,
  SingularMap,
  InvalidSpec,
  InternalError,
};

std::string_view error_name(ErrorCode code);

// Domain-level failures (bad input, violated precondition) versus numeric
// failures (a solver that could not deliver) map to different CLI exit codes.
bool is_numeric_failure(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_name(code)) + ": " + what);
}

}  // namespace kobayashi
