#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cyclsteg {

enum class ErrorCode {
  // image_core
  UnsupportedFormat,
  CorruptStream,
  ZeroDimension,
  // framing / codec
  PayloadTooLong,
  BadMagic,
  TruncatedStream,
  PayloadExceedsCapacity,
  // metrics
  DimensionMismatch,
  DegenerateDenominator,
  // sensor records and wire protocol
  TooManyRecords,
  TruncatedFrame,
  BadKind,
  BadProtocolMagic,
  LengthOverflow,
  TruncatedMessage,
  ConnectionFailed,
  // experiments
  InvalidSpec,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (notably the CLI) can branch on the kind without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the codec when a frame does not fit the carrier.
class CapacityError : public Error {
 public:
  CapacityError(std::size_t required_bits, std::size_t available_bits);

  std::size_t required_bits() const noexcept { return required_; }
  std::size_t available_bits() const noexcept { return available_; }

 private:
  std::size_t required_;
  std::size_t available_;
};

}  // namespace cyclsteg
