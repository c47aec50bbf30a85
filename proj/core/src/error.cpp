#include "symm/error.hpp"

namespace symm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroNormal: return "ZeroNormal";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NonPositiveThreshold: return "NonPositiveThreshold";
    case ErrorCode::DegenerateCloud: return "DegenerateCloud";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::NoSurface: return "NoSurface";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPositive: return "NonPositive";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

}  // namespace symm
