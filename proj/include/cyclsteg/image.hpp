#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace cyclsteg {

/// Colour plane selector. The numeric values are the cyclic channel
/// indicator used by the embedder (1 = red, 2 = green, 3 = blue).
enum class Channel : std::uint8_t { Red = 1, Green = 2, Blue = 3 };

inline constexpr std::array<Channel, 3> kChannels{Channel::Red, Channel::Green, Channel::Blue};

/// Peak sample value for the fixed 8-bit depth.
inline constexpr int kMaxIntensity = 255;

using Plane = std::vector<std::uint8_t>;

/// Row-major ordinal of a pixel, 0-based.
struct PixelIndex {
  std::size_t value = 0;
};

/// 8-bit three-plane raster. Each plane holds width*height samples in
/// row-major order. Values are immutable once constructed.
class RgbImage {
 public:
  /// Throws Error(ZeroDimension) for an empty side and
  /// Error(CorruptStream) when a plane length disagrees with width*height.
  RgbImage(std::uint32_t width, std::uint32_t height, Plane red, Plane green, Plane blue);

  /// Builds an image from interleaved RGBRGB... bytes.
  static RgbImage from_interleaved(std::uint32_t width, std::uint32_t height,
                                   std::span<const std::uint8_t> rgb);

  /// Uniform image with every sample of each plane set to the given value.
  static RgbImage filled(std::uint32_t width, std::uint32_t height, std::uint8_t red,
                         std::uint8_t green, std::uint8_t blue);

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }
  std::size_t sample_count() const noexcept { return 3 * pixel_count(); }

  std::span<const std::uint8_t> plane(Channel c) const noexcept {
    return planes_[static_cast<std::size_t>(c) - 1];
  }
  std::uint8_t sample(Channel c, PixelIndex p) const { return plane(c)[p.value]; }

  bool same_dimensions(const RgbImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  std::vector<std::uint8_t> interleaved() const;

  /// Copies of the three planes, for building a derived image.
  std::array<Plane, 3> planes() const { return planes_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::uint32_t width_;
  std::uint32_t height_;
  std::array<Plane, 3> planes_;
};

enum class ImageFormat { Png, Ppm };

/// Decodes an 8-bit RGB image. PNG input must be colour type RGB at bit
/// depth 8 without a transparency chunk; everything else is rejected with
/// Error(UnsupportedFormat). Malformed data raises Error(CorruptStream).
RgbImage load_image(std::span<const std::uint8_t> bytes, ImageFormat format);

/// Sniffs the format from the leading bytes (PNG signature or "P6").
RgbImage load_image(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> save_image(const RgbImage& img, ImageFormat format);

/// ".ppm" selects PPM, anything else PNG.
ImageFormat format_for_path(const std::filesystem::path& path);

RgbImage read_image_file(const std::filesystem::path& path);
void write_image_file(const std::filesystem::path& path, const RgbImage& img);

/// Deterministic synthetic image. Samples come from std::mt19937_64 seeded
/// with `seed`; each sample is the top 8 bits of one 64-bit draw, drawn in
/// pixel order with R, G, B interleaved.
RgbImage synth_image(std::uint64_t seed, std::uint32_t width, std::uint32_t height);

/// Nearest-neighbour resampling to a new size.
RgbImage resize_nearest(const RgbImage& img, std::uint32_t width, std::uint32_t height);

// Whole-file helpers shared by the CLI and the harness. Failures raise Error(Io).
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace cyclsteg
