#include "cyclsteg/pipeline.hpp"

#include <algorithm>
#include <string>

#include "cyclsteg/codec.hpp"
#include "cyclsteg/error.hpp"

namespace cyclsteg {

std::vector<std::uint8_t> encode_message(std::span<const std::uint8_t> png) {
  if (png.size() > 0xFFFFFFFFull) {
    throw Error(ErrorCode::LengthOverflow, "message body exceeds the 32-bit length field");
  }
  std::vector<std::uint8_t> out(kProtocolMagic.begin(), kProtocolMagic.end());
  const auto n = static_cast<std::uint32_t>(png.size());
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(n >> shift));
  out.insert(out.end(), png.begin(), png.end());
  return out;
}

std::vector<std::uint8_t> read_message(ByteReader& in, std::uint32_t max_length) {
  std::array<std::uint8_t, kMessageHeaderBytes> header{};
  in.read_exact(header);
  if (!std::equal(kProtocolMagic.begin(), kProtocolMagic.end(), header.begin())) {
    throw Error(ErrorCode::BadProtocolMagic, "message does not start with STG1");
  }
  const std::uint32_t length = (std::uint32_t{header[4]} << 24) | (std::uint32_t{header[5]} << 16) |
                               (std::uint32_t{header[6]} << 8) | std::uint32_t{header[7]};
  if (length > max_length) {
    throw Error(ErrorCode::LengthOverflow, "declared length " + std::to_string(length) +
                                               " exceeds limit " + std::to_string(max_length));
  }
  std::vector<std::uint8_t> body(length);
  in.read_exact(body);
  return body;
}

std::vector<std::uint8_t> build_sink_message(std::span<const SensorRecord> records,
                                             const RgbImage& cover, SendResult* result) {
  const auto payload = encode_aggregate(records);
  const auto stego = embed(cover, payload);
  auto message = encode_message(save_image(stego, ImageFormat::Png));
  if (result != nullptr) {
    result->record_count = records.size();
    result->payload_bytes = payload.size();
    result->capacity_bits = capacity_bits(cover);
    result->message_bytes = message.size();
  }
  return message;
}

SendResult sink_send(std::span<const SensorRecord> records, const RgbImage& cover,
                     const Endpoint& to) {
  SendResult result;
  const auto message = build_sink_message(records, cover, &result);
  auto stream = TcpStream::connect(to);
  stream.write_all(message);
  stream.close();
  return result;
}

SendResult sink_write_file(std::span<const SensorRecord> records, const RgbImage& cover,
                           const std::filesystem::path& path) {
  SendResult result;
  write_file_bytes(path, build_sink_message(records, cover, &result));
  return result;
}

FusionResult decode_stego_png(std::span<const std::uint8_t> png) {
  const auto stego = load_image(png, ImageFormat::Png);
  const auto payload = extract(stego);
  FusionResult out;
  out.records = decode_aggregate(payload);
  out.width = stego.width();
  out.height = stego.height();
  out.payload_bytes = payload.size();
  return out;
}

FusionResult fusion_read(ByteReader& in, std::uint32_t max_length) {
  return decode_stego_png(read_message(in, max_length));
}

FusionResult fusion_receive(TcpListener& listener, std::uint32_t max_length) {
  auto stream = listener.accept();
  return fusion_read(stream, max_length);
}

FusionResult fusion_read_file(const std::filesystem::path& path, std::uint32_t max_length) {
  const auto bytes = read_file_bytes(path);
  SpanReader reader(bytes);
  return fusion_read(reader, max_length);
}

}  // namespace cyclsteg
