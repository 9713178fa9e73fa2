#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cyclsteg/error.hpp"
#include "cyclsteg/sensor.hpp"
#include "support.hpp"

using namespace cyclsteg;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

std::vector<SensorRecord> random_records(std::mt19937_64& rng, std::size_t n) {
  std::vector<SensorRecord> out(n);
  for (auto& r : out) {
    r.sensor_id = static_cast<std::uint16_t>(rng());
    r.timestamp_ms = rng();
    r.kind = static_cast<SensorKind>(rng() % 5);
    r.value_milli = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng()));
  }
  return out;
}

}  // namespace

TEST_CASE("empty aggregate") {
  CHECK(encode_aggregate({}) == std::vector<std::uint8_t>{0x00, 0x00});
  CHECK(decode_aggregate(std::vector<std::uint8_t>{0x00, 0x00}).empty());
}

TEST_CASE("one record layout") {
  const SensorRecord r{1, 0, SensorKind::Temperature, 21500};
  const auto bytes = encode_aggregate(std::span(&r, 1));
  const std::vector<std::uint8_t> expected{
      0x00, 0x01,                                      // count
      0x00, 0x01,                                      // sensor id
      0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,  // timestamp
      0x00,                                            // kind
      0x00, 0x00, 0x53, 0xFC,                          // 21500
  };
  CHECK(bytes == expected);
  CHECK(decode_aggregate(bytes) == std::vector{r});
}

TEST_CASE("negative values are two's complement big-endian") {
  const SensorRecord r{0xBEEF, 0x0102030405060708ull, SensorKind::Other, -2};
  const auto bytes = encode_aggregate(std::span(&r, 1));
  REQUIRE(bytes.size() == 17);
  CHECK(bytes[2] == 0xBE);
  CHECK(bytes[4] == 0x01);
  CHECK(bytes[11] == 0x08);
  CHECK(bytes[12] == 4);
  CHECK(std::vector(bytes.end() - 4, bytes.end()) ==
        std::vector<std::uint8_t>{0xFF, 0xFF, 0xFF, 0xFE});
}

TEST_CASE("decode inverts encode for 1000 random lists") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    const auto records = random_records(rng, rng() % 40);
    const auto bytes = encode_aggregate(records);
    REQUIRE(bytes.size() == aggregate_size(records.size()));
    REQUIRE(decode_aggregate(bytes) == records);
  }
}

TEST_CASE("decode errors") {
  std::vector<std::uint8_t> sixteen(16, 0);
  sixteen[1] = 1;
  CHECK(code_of([&] { decode_aggregate(sixteen); }) == ErrorCode::TruncatedFrame);
  CHECK(code_of([] { decode_aggregate(std::vector<std::uint8_t>{0}); }) ==
        ErrorCode::TruncatedFrame);
  auto extra = encode_aggregate({});
  extra.push_back(0);
  CHECK(code_of([&] { decode_aggregate(extra); }) == ErrorCode::TruncatedFrame);

  const SensorRecord r{1, 2, SensorKind::Sound, 3};
  auto bad = encode_aggregate(std::span(&r, 1));
  bad[12] = 5;
  CHECK(code_of([&] { decode_aggregate(bad); }) == ErrorCode::BadKind);
}

TEST_CASE("count limit") {
  const std::vector<SensorRecord> max(65535);
  CHECK(encode_aggregate(max).size() == aggregate_size(65535));
  const std::vector<SensorRecord> over(65536);
  CHECK(code_of([&] { encode_aggregate(over); }) == ErrorCode::TooManyRecords);
}
