#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cyclsteg/image.hpp"

namespace cyclsteg::detail {

bool has_png_signature(std::span<const std::uint8_t> bytes) noexcept;
RgbImage decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const RgbImage& img);

}  // namespace cyclsteg::detail
