#include "cyclsteg/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "cyclsteg/error.hpp"
#include "png_io.hpp"

namespace cyclsteg {

RgbImage::RgbImage(std::uint32_t width, std::uint32_t height, Plane red, Plane green, Plane blue)
    : width_(width), height_(height), planes_{std::move(red), std::move(green), std::move(blue)} {
  if (width_ == 0 || height_ == 0) {
    throw Error(ErrorCode::ZeroDimension, "image sides must be at least 1 pixel");
  }
  for (const auto& p : planes_) {
    if (p.size() != pixel_count()) {
      throw Error(ErrorCode::CorruptStream, "plane length " + std::to_string(p.size()) +
                                                " does not match " + std::to_string(width_) +
                                                "x" + std::to_string(height_));
    }
  }
}

RgbImage RgbImage::from_interleaved(std::uint32_t width, std::uint32_t height,
                                    std::span<const std::uint8_t> rgb) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (rgb.size() != 3 * n) {
    throw Error(ErrorCode::CorruptStream, "interleaved buffer has " +
                                              std::to_string(rgb.size()) + " bytes, expected " +
                                              std::to_string(3 * n));
  }
  Plane r(n), g(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = rgb[3 * i];
    g[i] = rgb[3 * i + 1];
    b[i] = rgb[3 * i + 2];
  }
  return RgbImage(width, height, std::move(r), std::move(g), std::move(b));
}

RgbImage RgbImage::filled(std::uint32_t width, std::uint32_t height, std::uint8_t red,
                          std::uint8_t green, std::uint8_t blue) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  return RgbImage(width, height, Plane(n, red), Plane(n, green), Plane(n, blue));
}

std::vector<std::uint8_t> RgbImage::interleaved() const {
  std::vector<std::uint8_t> out(sample_count());
  for (std::size_t i = 0; i < pixel_count(); ++i) {
    out[3 * i] = planes_[0][i];
    out[3 * i + 1] = planes_[1][i];
    out[3 * i + 2] = planes_[2][i];
  }
  return out;
}

namespace {

class PpmHeaderReader {
 public:
  explicit PpmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw Error(ErrorCode::CorruptStream, "PPM header: expected a number");
    }
    std::uint64_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 0xFFFFFFFFull) throw Error(ErrorCode::CorruptStream, "PPM header: number too large");
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::CorruptStream, "PPM header: missing separator before raster");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

RgbImage decode_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw Error(ErrorCode::CorruptStream, "not a PPM stream");
  }
  if (bytes[1] != '6') {
    throw Error(ErrorCode::UnsupportedFormat, "only binary PPM (P6) is supported");
  }
  PpmHeaderReader header(bytes);
  const auto width = header.number();
  const auto height = header.number();
  const auto maxval = header.number();
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::ZeroDimension, "PPM declares an empty image");
  }
  if (maxval != 255) {
    throw Error(ErrorCode::UnsupportedFormat,
                "PPM maxval " + std::to_string(maxval) + " (only 255 is supported)");
  }
  const std::size_t offset = header.raster_offset();
  const std::size_t expected = 3 * width * height;
  if (bytes.size() - std::min(offset, bytes.size()) != expected) {
    throw Error(ErrorCode::CorruptStream, "PPM raster length does not match header");
  }
  return RgbImage::from_interleaved(static_cast<std::uint32_t>(width),
                                    static_cast<std::uint32_t>(height), bytes.subspan(offset));
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  const std::string header = "P6\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto raster = img.interleaved();
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

}  // namespace

RgbImage load_image(std::span<const std::uint8_t> bytes, ImageFormat format) {
  return format == ImageFormat::Png ? detail::decode_png(bytes) : decode_ppm(bytes);
}

RgbImage load_image(std::span<const std::uint8_t> bytes) {
  if (detail::has_png_signature(bytes)) return detail::decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P') return decode_ppm(bytes);
  throw Error(ErrorCode::UnsupportedFormat, "unrecognised image stream (expected PNG or PPM)");
}

std::vector<std::uint8_t> save_image(const RgbImage& img, ImageFormat format) {
  return format == ImageFormat::Png ? detail::encode_png(img) : encode_ppm(img);
}

ImageFormat format_for_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".ppm" ? ImageFormat::Ppm : ImageFormat::Png;
}

RgbImage read_image_file(const std::filesystem::path& path) {
  return load_image(read_file_bytes(path));
}

void write_image_file(const std::filesystem::path& path, const RgbImage& img) {
  write_file_bytes(path, save_image(img, format_for_path(path)));
}

RgbImage synth_image(std::uint64_t seed, std::uint32_t width, std::uint32_t height) {
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::ZeroDimension, "synthetic image sides must be at least 1 pixel");
  }
  std::mt19937_64 rng(seed);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  Plane r(n), g(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = static_cast<std::uint8_t>(rng() >> 56);
    g[i] = static_cast<std::uint8_t>(rng() >> 56);
    b[i] = static_cast<std::uint8_t>(rng() >> 56);
  }
  return RgbImage(width, height, std::move(r), std::move(g), std::move(b));
}

RgbImage resize_nearest(const RgbImage& img, std::uint32_t width, std::uint32_t height) {
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::ZeroDimension, "target sides must be at least 1 pixel");
  }
  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::array<Plane, 3> out{Plane(n), Plane(n), Plane(n)};
  for (std::uint32_t y = 0; y < height; ++y) {
    const std::size_t sy = static_cast<std::uint64_t>(y) * img.height() / height;
    for (std::uint32_t x = 0; x < width; ++x) {
      const std::size_t sx = static_cast<std::uint64_t>(x) * img.width() / width;
      const PixelIndex src{sy * img.width() + sx};
      const std::size_t dst = static_cast<std::size_t>(y) * width + x;
      for (std::size_t c = 0; c < 3; ++c) out[c][dst] = img.sample(kChannels[c], src);
    }
  }
  return RgbImage(width, height, std::move(out[0]), std::move(out[1]), std::move(out[2]));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "read failed: " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace cyclsteg
