#include "cyclsteg/error.hpp"

namespace cyclsteg {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptStream: return "CorruptStream";
    case ErrorCode::ZeroDimension: return "ZeroDimension";
    case ErrorCode::PayloadTooLong: return "PayloadTooLong";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedStream: return "TruncatedStream";
    case ErrorCode::PayloadExceedsCapacity: return "PayloadExceedsCapacity";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::TooManyRecords: return "TooManyRecords";
    case ErrorCode::TruncatedFrame: return "TruncatedFrame";
    case ErrorCode::BadKind: return "BadKind";
    case ErrorCode::BadProtocolMagic: return "BadProtocolMagic";
    case ErrorCode::LengthOverflow: return "LengthOverflow";
    case ErrorCode::TruncatedMessage: return "TruncatedMessage";
    case ErrorCode::ConnectionFailed: return "ConnectionFailed";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

CapacityError::CapacityError(std::size_t required_bits, std::size_t available_bits)
    : Error(ErrorCode::PayloadExceedsCapacity,
            "frame needs " + std::to_string(required_bits) + " bits, carrier holds " +
                std::to_string(available_bits) + " bits"),
      required_(required_bits),
      available_(available_bits) {}

}  // namespace cyclsteg
