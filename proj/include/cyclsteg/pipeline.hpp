#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cyclsteg/image.hpp"
#include "cyclsteg/net.hpp"
#include "cyclsteg/sensor.hpp"

// Sink -> fusion-centre transport. One message per connection (or per file
// in file-drop mode):
//
//   "STG1" | u32 big-endian length | PNG stego image (length bytes)

namespace cyclsteg {

inline constexpr std::array<std::uint8_t, 4> kProtocolMagic{'S', 'T', 'G', '1'};
inline constexpr std::size_t kMessageHeaderBytes = 8;
inline constexpr std::uint32_t kDefaultMaxMessageBytes = 64u << 20;

/// Wraps a PNG body in the protocol header.
std::vector<std::uint8_t> encode_message(std::span<const std::uint8_t> png);

/// Reads one message. Throws Error(BadProtocolMagic), Error(LengthOverflow)
/// when the declared length exceeds `max_length`, and Error(TruncatedMessage)
/// if the source ends early.
std::vector<std::uint8_t> read_message(ByteReader& in,
                                       std::uint32_t max_length = kDefaultMaxMessageBytes);

struct SendResult {
  std::size_t record_count = 0;
  std::size_t payload_bytes = 0;
  std::size_t capacity_bits = 0;
  std::size_t message_bytes = 0;
};

/// Encodes the records, embeds them in `cover` and returns the full wire
/// message. Throws CapacityError when the aggregate does not fit.
std::vector<std::uint8_t> build_sink_message(std::span<const SensorRecord> records,
                                             const RgbImage& cover, SendResult* result = nullptr);

/// Connect, send one message, close.
SendResult sink_send(std::span<const SensorRecord> records, const RgbImage& cover,
                     const Endpoint& to);

/// File-drop variant: writes the same bytes that sink_send puts on the wire.
SendResult sink_write_file(std::span<const SensorRecord> records, const RgbImage& cover,
                           const std::filesystem::path& path);

struct FusionResult {
  std::vector<SensorRecord> records;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::size_t payload_bytes = 0;
};

/// Decodes the PNG body, extracts blindly (no cover needed) and decodes the
/// aggregate.
FusionResult decode_stego_png(std::span<const std::uint8_t> png);

/// Reads one message from `in` and decodes it.
FusionResult fusion_read(ByteReader& in, std::uint32_t max_length = kDefaultMaxMessageBytes);

/// Accepts one connection on `listener` and decodes its message.
FusionResult fusion_receive(TcpListener& listener,
                            std::uint32_t max_length = kDefaultMaxMessageBytes);

FusionResult fusion_read_file(const std::filesystem::path& path,
                              std::uint32_t max_length = kDefaultMaxMessageBytes);

}  // namespace cyclsteg
