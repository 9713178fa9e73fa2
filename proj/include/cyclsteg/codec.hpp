#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cyclsteg/framing.hpp"
#include "cyclsteg/image.hpp"

// Stego format version 1
// ----------------------
// Bit i of the framed bitstream replaces the least-significant bit of one
// sample at pixel i (row-major from the top-left). The plane is chosen by a
// cyclic indicator starting at red and advancing after every bit:
// red, green, blue, red, ... One bit per pixel, so capacity = width*height.

namespace cyclsteg {

inline constexpr int kStegoFormatVersion = 1;

/// Plane that carries frame bit `bit_ordinal`: ((i mod 3) + 1).
constexpr Channel channel_for_bit(std::size_t bit_ordinal) noexcept {
  return static_cast<Channel>(bit_ordinal % 3 + 1);
}

constexpr Channel next_channel(Channel c) noexcept {
  return c == Channel::Blue ? Channel::Red : static_cast<Channel>(static_cast<int>(c) + 1);
}

/// One embeddable bit per pixel.
std::size_t capacity_bits(const RgbImage& img) noexcept;

/// Largest payload (bytes) whose frame fits the carrier.
std::size_t usable_payload_bytes(const RgbImage& img) noexcept;

/// Writes the frame into a copy of `cover`. Throws CapacityError when the
/// frame is longer than capacity_bits(cover).
RgbImage embed(const RgbImage& cover, const FramedBitstream& frame);
RgbImage embed(const RgbImage& cover, std::span<const std::uint8_t> payload);

/// Reads the first `count` plan bits (count <= capacity_bits).
BitSequence read_plan_bits(const RgbImage& stego, std::size_t count);

/// Blind extraction. Throws Error(BadMagic) for images without a frame and
/// Error(TruncatedStream) when the declared length exceeds the capacity.
std::vector<std::uint8_t> extract(const RgbImage& stego);

}  // namespace cyclsteg
