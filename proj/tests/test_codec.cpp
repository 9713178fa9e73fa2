#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cyclsteg/codec.hpp"
#include "cyclsteg/error.hpp"
#include "cyclsteg/metrics.hpp"
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

// Indicator walk written out the long way: start at 1, advance after every
// bit, reset 3 -> 1.
std::vector<int> indicator_walk(std::size_t n) {
  std::vector<int> out;
  int indicator = 1;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(indicator);
    if (indicator == 3) {
      indicator = 1;
    } else {
      ++indicator;
    }
  }
  return out;
}

// Frame bits computed without the framing module: magic, length, bytes.
std::vector<int> oracle_frame_bits(const std::vector<std::uint8_t>& payload) {
  std::vector<int> bits;
  const std::uint64_t magic = 0x5357;
  for (int i = 15; i >= 0; --i) bits.push_back(static_cast<int>((magic >> i) & 1));
  const std::uint64_t len = payload.size();
  for (int i = 31; i >= 0; --i) bits.push_back(static_cast<int>((len >> i) & 1));
  for (const auto byte : payload) {
    for (int i = 7; i >= 0; --i) bits.push_back((byte >> i) & 1);
  }
  return bits;
}

// Sample-by-sample check of one embed against the oracle. Returns the number
// of violations.
std::size_t locality_violations(const RgbImage& cover, const RgbImage& stego,
                                const std::vector<std::uint8_t>& payload) {
  const auto bits = oracle_frame_bits(payload);
  const auto walk = indicator_walk(bits.size());
  std::size_t violations = 0;
  for (std::size_t p = 0; p < cover.pixel_count(); ++p) {
    for (int c = 1; c <= 3; ++c) {
      const auto ch = static_cast<Channel>(c);
      const int before = cover.sample(ch, PixelIndex{p});
      const int after = stego.sample(ch, PixelIndex{p});
      if (p < bits.size() && walk[p] == c) {
        if ((after & 1) != bits[p] || (after & ~1) != (before & ~1)) ++violations;
      } else if (after != before) {
        ++violations;
      }
    }
  }
  return violations;
}

}  // namespace

TEST_CASE("channel_for_bit follows the indicator cycle") {
  CHECK(channel_for_bit(0) == Channel::Red);
  CHECK(channel_for_bit(1) == Channel::Green);
  CHECK(channel_for_bit(2) == Channel::Blue);
  CHECK(channel_for_bit(3) == Channel::Red);
  CHECK(channel_for_bit(65535) == Channel::Red);  // 65535 = 3 * 21845
  const auto walk = indicator_walk(70000);
  for (std::size_t i = 0; i < walk.size(); ++i) {
    REQUIRE(static_cast<int>(channel_for_bit(i)) == walk[i]);
  }
  CHECK(next_channel(Channel::Blue) == Channel::Red);
}

TEST_CASE("capacity is one bit per pixel") {
  CHECK(capacity_bits(RgbImage::filled(256, 256, 0, 0, 0)) == 65536);
  CHECK(usable_payload_bytes(RgbImage::filled(256, 256, 0, 0, 0)) == 8186);
  CHECK(capacity_bits(RgbImage::filled(1, 1, 0, 0, 0)) == 1);
  CHECK(usable_payload_bytes(RgbImage::filled(1, 1, 0, 0, 0)) == 0);
  CHECK(capacity_bits(RgbImage::filled(128, 128, 0, 0, 0)) == 16384);
  CHECK(usable_payload_bytes(RgbImage::filled(128, 128, 0, 0, 0)) == 2042);
}

TEST_CASE("header-only embed into an all-zero cover") {
  // 4x4 has 16 pixels, fewer than the 48 header bits.
  const auto tiny = RgbImage::filled(4, 4, 0, 0, 0);
  try {
    embed(tiny, std::span<const std::uint8_t>{});
    FAIL("expected CapacityError");
  } catch (const CapacityError& e) {
    CHECK(e.required_bits() == 48);
    CHECK(e.available_bits() == 16);
  }

  const auto cover = RgbImage::filled(8, 8, 0, 0, 0);
  const auto stego = embed(cover, std::span<const std::uint8_t>{});
  const auto bits = oracle_frame_bits({});
  const auto walk = indicator_walk(bits.size());
  std::size_t raised = 0;
  for (std::size_t p = 0; p < cover.pixel_count(); ++p) {
    for (int c = 1; c <= 3; ++c) {
      const int expected = (p < bits.size() && walk[p] == c) ? bits[p] : 0;
      REQUIRE(stego.sample(static_cast<Channel>(c), PixelIndex{p}) == expected);
      raised += static_cast<std::size_t>(expected);
    }
  }
  CHECK(raised == 9);  // popcount(0x5357); the length field is all zero
}

TEST_CASE("capacity boundary at 256x256") {
  const auto cover = synth_image(1, 256, 256);
  std::mt19937_64 rng(5);
  const auto fits = test::random_bytes(rng, 8186);
  CHECK(extract(embed(cover, fits)) == fits);
  try {
    embed(cover, test::random_bytes(rng, 8187));
    FAIL("expected CapacityError");
  } catch (const CapacityError& e) {
    CHECK(e.code() == ErrorCode::PayloadExceedsCapacity);
    CHECK(e.required_bits() == 65544);
    CHECK(e.available_bits() == 65536);
  }
}

TEST_CASE("round trip over 1000 random covers and payloads") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::uint32_t> side(7, 48);
  for (int i = 0; i < 1000; ++i) {
    const auto cover = test::random_image(rng, side(rng), side(rng));
    std::uniform_int_distribution<std::size_t> len(0, usable_payload_bytes(cover));
    const auto payload = test::random_bytes(rng, len(rng));
    REQUIRE(extract(embed(cover, payload)) == payload);
  }
}

TEST_CASE("locality: only the planned LSBs change") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::uint32_t> side(7, 16);
  for (int i = 0; i < 200; ++i) {
    const auto cover = test::random_image(rng, side(rng), side(rng));
    std::uniform_int_distribution<std::size_t> len(0, usable_payload_bytes(cover));
    const auto payload = test::random_bytes(rng, len(rng));
    const auto before = cover;
    const auto stego = embed(cover, payload);
    REQUIRE(cover == before);
    REQUIRE(locality_violations(cover, stego, payload) == 0);
  }
}

TEST_CASE("damage bound on MSE") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto cover = test::random_image(rng, 32, 24);
    std::uniform_int_distribution<std::size_t> len(0, usable_payload_bytes(cover));
    const auto payload = test::random_bytes(rng, len(rng));
    const double bound = static_cast<double>(framed_bit_count(payload.size())) /
                         static_cast<double>(cover.sample_count());
    CHECK(mse(cover, embed(cover, payload)) <= bound);
  }
}

TEST_CASE("random payload flips LSBs with probability one half") {
  const auto cover = synth_image(99, 256, 256);
  std::mt19937_64 rng(100);
  const auto payload = test::random_bytes(rng, 8186);
  const auto stego = embed(cover, payload);
  std::size_t flips = 0;
  for (const auto c : kChannels) {
    for (std::size_t p = 0; p < cover.pixel_count(); ++p) {
      flips += cover.sample(c, PixelIndex{p}) != stego.sample(c, PixelIndex{p});
    }
  }
  const double n = static_cast<double>(framed_bit_count(payload.size()));
  CHECK(std::abs(static_cast<double>(flips) - n / 2) <= 4 * std::sqrt(n / 4));
}

TEST_CASE("embed is deterministic") {
  const auto cover = synth_image(4, 40, 40);
  const std::vector<std::uint8_t> payload{1, 2, 3, 4, 5};
  CHECK(embed(cover, payload) == embed(cover, payload));
}

TEST_CASE("extract edge cases") {
  const auto cover = synth_image(3, 20, 20);
  CHECK(extract(embed(cover, std::span<const std::uint8_t>{})).empty());

  CHECK(code_of([] { extract(RgbImage::filled(1, 1, 0, 0, 0)); }) == ErrorCode::TruncatedStream);
  CHECK(code_of([] { extract(RgbImage::filled(16, 16, 0, 0, 0)); }) == ErrorCode::BadMagic);

  // Valid magic with a declared length the 20x20 carrier cannot hold.
  FramedBitstream hostile;
  append_bits_msb_first(hostile.bits, kFrameMagic, kMagicBits);
  append_bits_msb_first(hostile.bits, 0xFFFFFFFFu, kLengthBits);
  CHECK(code_of([&] { extract(embed(cover, hostile)); }) == ErrorCode::TruncatedStream);
}

TEST_CASE("plain synthetic images are rejected by the magic check") {
  int bad_magic = 0;
  int other = 0;
  const int trials = 2000;
  for (int seed = 0; seed < trials; ++seed) {
    try {
      extract(synth_image(static_cast<std::uint64_t>(seed), 64, 64));
      ++other;
    } catch (const Error& e) {
      (e.code() == ErrorCode::BadMagic ? bad_magic : other) += 1;
    }
  }
  // Expected false-magic count is trials / 65536 ~ 0.03.
  CHECK(bad_magic >= trials - 3);
  MESSAGE("BadMagic on " << bad_magic << " of " << trials << " plain images");
}
