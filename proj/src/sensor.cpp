#include "cyclsteg/sensor.hpp"

#include <string>
#include <type_traits>

#include "cyclsteg/error.hpp"

namespace cyclsteg {

std::string_view to_string(SensorKind kind) noexcept {
  switch (kind) {
    case SensorKind::Temperature: return "temperature";
    case SensorKind::Pressure: return "pressure";
    case SensorKind::Motion: return "motion";
    case SensorKind::Sound: return "sound";
    case SensorKind::Other: return "other";
  }
  return "invalid";
}

namespace {

template <typename T>
void put_be(std::vector<std::uint8_t>& out, T value) {
  using U = std::make_unsigned_t<T>;
  const auto u = static_cast<U>(value);
  for (std::size_t i = sizeof(U); i-- > 0;) out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

template <typename T>
T get_be(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) u = static_cast<U>((u << 8) | bytes[pos++]);
  return static_cast<T>(u);
}

}  // namespace

std::vector<std::uint8_t> encode_aggregate(std::span<const SensorRecord> records) {
  if (records.size() > 0xFFFF) {
    throw Error(ErrorCode::TooManyRecords,
                std::to_string(records.size()) + " records exceed the 16-bit count field");
  }
  std::vector<std::uint8_t> out;
  out.reserve(aggregate_size(records.size()));
  put_be(out, static_cast<std::uint16_t>(records.size()));
  for (const auto& r : records) {
    put_be(out, r.sensor_id);
    put_be(out, r.timestamp_ms);
    put_be(out, static_cast<std::uint8_t>(r.kind));
    put_be(out, r.value_milli);
  }
  return out;
}

std::vector<SensorRecord> decode_aggregate(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kAggregateHeaderBytes) {
    throw Error(ErrorCode::TruncatedFrame, "aggregate shorter than its count field");
  }
  std::size_t pos = 0;
  const auto count = get_be<std::uint16_t>(bytes, pos);
  if (bytes.size() != aggregate_size(count)) {
    throw Error(ErrorCode::TruncatedFrame, "count " + std::to_string(count) + " needs " +
                                               std::to_string(aggregate_size(count)) +
                                               " bytes, got " + std::to_string(bytes.size()));
  }
  std::vector<SensorRecord> records;
  records.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SensorRecord r;
    r.sensor_id = get_be<std::uint16_t>(bytes, pos);
    r.timestamp_ms = get_be<std::uint64_t>(bytes, pos);
    const auto kind = get_be<std::uint8_t>(bytes, pos);
    if (kind > kMaxSensorKind) {
      throw Error(ErrorCode::BadKind, "record " + std::to_string(i) + " has kind code " +
                                          std::to_string(kind));
    }
    r.kind = static_cast<SensorKind>(kind);
    r.value_milli = get_be<std::int32_t>(bytes, pos);
    records.push_back(r);
  }
  return records;
}

}  // namespace cyclsteg
