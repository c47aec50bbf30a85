#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symm {

enum class ErrorCode {
  ZeroNormal,
  NonFinite,
  EmptyCloud,
  SizeMismatch,
  TooLarge,
  NonConvergence,
  NonPositiveThreshold,
  DegenerateCloud,
  ParseError,
  UnsupportedFormat,
  NoSurface,
  IoError,
  ZeroVector,
  DimensionMismatch,
  NonPositive,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code is machine-checkable; the
/// message carries context such as file offsets.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace symm
