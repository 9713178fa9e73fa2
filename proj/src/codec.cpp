#include "cyclsteg/codec.hpp"

#include <string>

#include "cyclsteg/error.hpp"

namespace cyclsteg {

std::size_t capacity_bits(const RgbImage& img) noexcept { return img.pixel_count(); }

std::size_t usable_payload_bytes(const RgbImage& img) noexcept {
  const std::size_t bits = capacity_bits(img);
  return bits < kHeaderBits ? 0 : (bits - kHeaderBits) / 8;
}

RgbImage embed(const RgbImage& cover, const FramedBitstream& frame) {
  const std::size_t available = capacity_bits(cover);
  if (frame.size() > available) throw CapacityError(frame.size(), available);

  auto planes = cover.planes();
  Channel channel = Channel::Red;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    auto& sample = planes[static_cast<std::size_t>(channel) - 1][i];
    sample = static_cast<std::uint8_t>((sample & 0xFEu) | (frame.bits[i] & 1u));
    channel = next_channel(channel);
  }
  return RgbImage(cover.width(), cover.height(), std::move(planes[0]), std::move(planes[1]),
                  std::move(planes[2]));
}

RgbImage embed(const RgbImage& cover, std::span<const std::uint8_t> payload) {
  return embed(cover, frame(payload));
}

BitSequence read_plan_bits(const RgbImage& stego, std::size_t count) {
  BitSequence bits(count);
  Channel channel = Channel::Red;
  for (std::size_t i = 0; i < count; ++i) {
    bits[i] = stego.sample(channel, PixelIndex{i}) & 1u;
    channel = next_channel(channel);
  }
  return bits;
}

std::vector<std::uint8_t> extract(const RgbImage& stego) {
  const std::size_t available = capacity_bits(stego);
  if (available < kHeaderBits) {
    throw Error(ErrorCode::TruncatedStream, "carrier holds " + std::to_string(available) +
                                                " bits, fewer than the frame header");
  }
  const FrameHeader header = parse_header(read_plan_bits(stego, kHeaderBits));
  if (header.total_bits() > available) {
    throw Error(ErrorCode::TruncatedStream,
                "declared payload of " + std::to_string(header.payload_bytes) +
                    " bytes exceeds carrier capacity of " + std::to_string(available) + " bits");
  }
  return deframe(read_plan_bits(stego, header.total_bits()));
}

}  // namespace cyclsteg
