#include "kobayashi/errors.hpp"

namespace kobayashi {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::NotBoundary: return "NotBoundary";
    case ErrorCode::NonSmoothVertex: return "NonSmoothVertex";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::GridError: return "GridError";
    case ErrorCode::DegenerateRays: return "DegenerateRays";
    case ErrorCode::NormalizationError: return "NormalizationError";
    case ErrorCode::EmptyClip: return "EmptyClip";
    case ErrorCode::DegenerateClosestPoint: return "DegenerateClosestPoint";
    case ErrorCode::HypothesisError: return "HypothesisError";
    case ErrorCode::NormalUndefined: return "NormalUndefined";
    case ErrorCode::NotTangential: return "NotTangential";
    case ErrorCode::UnboundedDomain: return "UnboundedDomain";
    case ErrorCode::SingularMap: return "SingularMap";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "Unknown";
}

bool is_numeric_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateRays:
    case ErrorCode::NormalizationError:
    case ErrorCode::DegenerateClosestPoint:
    case ErrorCode::SingularMap:
    case ErrorCode::InternalError:
      return true;
    default:
      return false;
  }
}

}  // namespace kobayashi
