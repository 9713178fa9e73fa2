#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cyclsteg {

/// Frame header: 16-bit magic followed by a 32-bit big-endian payload
/// length, both MSB-first.
inline constexpr std::uint16_t kFrameMagic = 0x5357;
inline constexpr std::size_t kMagicBits = 16;
inline constexpr std::size_t kLengthBits = 32;
inline constexpr std::size_t kHeaderBits = kMagicBits + kLengthBits;

/// Ordered bit sequence, one bit (0 or 1) per element, in embedding order.
using BitSequence = std::vector<std::uint8_t>;

/// MAGIC || LENGTH || PAYLOAD, ready to be written into a carrier.
struct FramedBitstream {
  BitSequence bits;

  std::size_t size() const noexcept { return bits.size(); }
};

/// Appends the low `width` bits of `value`, most significant first.
void append_bits_msb_first(BitSequence& out, std::uint64_t value, std::size_t width);

/// Reads `width` bits starting at `offset` as an MSB-first unsigned value.
/// The caller guarantees offset + width <= bits.size().
std::uint64_t read_bits_msb_first(std::span<const std::uint8_t> bits, std::size_t offset,
                                  std::size_t width);

/// Number of frame bits for a payload of `payload_bytes`.
constexpr std::size_t framed_bit_count(std::size_t payload_bytes) noexcept {
  return kHeaderBits + 8 * payload_bytes;
}

/// Throws Error(PayloadTooLong) at 2^32 bytes or more.
FramedBitstream frame(std::span<const std::uint8_t> payload);

/// Parsed header: magic already validated.
struct FrameHeader {
  std::uint32_t payload_bytes = 0;

  std::size_t total_bits() const noexcept { return framed_bit_count(payload_bytes); }
};

/// Validates the first kHeaderBits bits. Throws Error(TruncatedStream) when
/// fewer are supplied and Error(BadMagic) on a magic mismatch.
FrameHeader parse_header(std::span<const std::uint8_t> bits);

/// Inverse of frame(). Trailing bits beyond the declared length are ignored.
std::vector<std::uint8_t> deframe(std::span<const std::uint8_t> bits);

}  // namespace cyclsteg
