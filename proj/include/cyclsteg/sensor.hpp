#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace cyclsteg {

enum class SensorKind : std::uint8_t {
  Temperature = 0,
  Pressure = 1,
  Motion = 2,
  Sound = 3,
  Other = 4,
};

inline constexpr std::uint8_t kMaxSensorKind = 4;

std::string_view to_string(SensorKind kind) noexcept;

/// One reading. `value_milli` is in thousandths of the kind's base unit.
struct SensorRecord {
  std::uint16_t sensor_id = 0;
  std::uint64_t timestamp_ms = 0;
  SensorKind kind = SensorKind::Temperature;
  std::int32_t value_milli = 0;

  friend bool operator==(const SensorRecord&, const SensorRecord&) = default;
};

/// Wire size of one record: id(2) ts(8) kind(1) value(4), big-endian.
inline constexpr std::size_t kRecordBytes = 15;
inline constexpr std::size_t kAggregateHeaderBytes = 2;

constexpr std::size_t aggregate_size(std::size_t count) noexcept {
  return kAggregateHeaderBytes + kRecordBytes * count;
}

/// u16 count followed by `count` records. Throws Error(TooManyRecords)
/// for 65536 or more records.
std::vector<std::uint8_t> encode_aggregate(std::span<const SensorRecord> records);

/// Throws Error(TruncatedFrame) when the length is not 2 + 15*count and
/// Error(BadKind) for a kind code above 4.
std::vector<SensorRecord> decode_aggregate(std::span<const std::uint8_t> bytes);

}  // namespace cyclsteg
