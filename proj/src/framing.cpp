#include "cyclsteg/framing.hpp"

#include <string>

#include "cyclsteg/error.hpp"

namespace cyclsteg {

void append_bits_msb_first(BitSequence& out, std::uint64_t value, std::size_t width) {
  for (std::size_t i = width; i-- > 0;) {
    out.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
  }
}

std::uint64_t read_bits_msb_first(std::span<const std::uint8_t> bits, std::size_t offset,
                                  std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v = (v << 1) | (bits[offset + i] & 1u);
  return v;
}

FramedBitstream frame(std::span<const std::uint8_t> payload) {
  if (payload.size() > 0xFFFFFFFFull) {
    throw Error(ErrorCode::PayloadTooLong,
                std::to_string(payload.size()) + " bytes exceeds the 32-bit length field");
  }
  FramedBitstream out;
  out.bits.reserve(framed_bit_count(payload.size()));
  append_bits_msb_first(out.bits, kFrameMagic, kMagicBits);
  append_bits_msb_first(out.bits, payload.size(), kLengthBits);
  for (const std::uint8_t byte : payload) append_bits_msb_first(out.bits, byte, 8);
  return out;
}

FrameHeader parse_header(std::span<const std::uint8_t> bits) {
  if (bits.size() < kHeaderBits) {
    throw Error(ErrorCode::TruncatedStream, "only " + std::to_string(bits.size()) +
                                                " bits available, header needs " +
                                                std::to_string(kHeaderBits));
  }
  if (read_bits_msb_first(bits, 0, kMagicBits) != kFrameMagic) {
    throw Error(ErrorCode::BadMagic, "not a stego image");
  }
  return FrameHeader{static_cast<std::uint32_t>(read_bits_msb_first(bits, kMagicBits, kLengthBits))};
}

std::vector<std::uint8_t> deframe(std::span<const std::uint8_t> bits) {
  const FrameHeader header = parse_header(bits);
  if (bits.size() < header.total_bits()) {
    throw Error(ErrorCode::TruncatedStream,
                "frame declares " + std::to_string(header.payload_bytes) + " bytes (" +
                    std::to_string(header.total_bits()) + " bits) but only " +
                    std::to_string(bits.size()) + " bits are available");
  }
  std::vector<std::uint8_t> payload(header.payload_bytes);
  for (std::size_t i = 0; i < payload.size(); ++i) {
    payload[i] = static_cast<std::uint8_t>(read_bits_msb_first(bits, kHeaderBits + 8 * i, 8));
  }
  return payload;
}

}  // namespace cyclsteg
