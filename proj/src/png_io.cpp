#include "png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <string>

#include "cyclsteg/error.hpp"

namespace cyclsteg::detail {

namespace {

struct MemoryReader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t count) {
  auto* reader = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (reader->bytes.size() - reader->pos < count) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(out, reader->bytes.data() + reader->pos, count);
  reader->pos += count;
}

void write_to_vector(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + count);
}

void flush_noop(png_structp) {}

void error_to_jump(png_structp png, png_const_charp message) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text != nullptr && message != nullptr) *text = message;
  png_longjmp(png, 1);
}

void warning_ignore(png_structp, png_const_charp) {}

enum class ReadStatus { Ok, Corrupt, Unsupported };

// Everything with a non-trivial destructor lives in the caller so a longjmp
// out of libpng never skips one.
ReadStatus read_png(png_structp png, png_infop info, MemoryReader& reader, png_uint_32& width,
                    png_uint_32& height, std::vector<std::uint8_t>& raster,
                    std::vector<png_bytep>& rows, std::string& detail) {
  if (setjmp(png_jmpbuf(png))) return ReadStatus::Corrupt;

  png_set_read_fn(png, &reader, read_from_memory);
  png_read_info(png, info);

  int bit_depth = 0;
  int color_type = 0;
  int interlace = 0;
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, &interlace, nullptr, nullptr);
  if (bit_depth != 8) {
    detail = "bit depth " + std::to_string(bit_depth) + " (only 8 is supported)";
    return ReadStatus::Unsupported;
  }
  if (color_type != PNG_COLOR_TYPE_RGB) {
    detail = color_type == PNG_COLOR_TYPE_PALETTE ? "paletted PNG"
             : (color_type & PNG_COLOR_MASK_ALPHA) != 0 ? "PNG with alpha channel"
                                                        : "greyscale PNG";
    return ReadStatus::Unsupported;
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS) != 0) {
    detail = "PNG with transparency chunk";
    return ReadStatus::Unsupported;
  }
  if (interlace != PNG_INTERLACE_NONE) png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const std::size_t stride = 3 * static_cast<std::size_t>(width);
  raster.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = raster.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  return ReadStatus::Ok;
}

bool write_png(png_structp png, png_infop info, const RgbImage& img,
               std::vector<std::uint8_t>& raster, std::vector<png_bytep>& rows,
               std::vector<std::uint8_t>& out) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_write_fn(png, &out, write_to_vector, flush_noop);
  png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = 3 * static_cast<std::size_t>(img.width());
  for (std::uint32_t y = 0; y < img.height(); ++y) rows[y] = raster.data() + y * stride;
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  return true;
}

}  // namespace

bool has_png_signature(std::span<const std::uint8_t> bytes) noexcept {
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

RgbImage decode_png(std::span<const std::uint8_t> bytes) {
  if (!has_png_signature(bytes)) throw Error(ErrorCode::CorruptStream, "missing PNG signature");

  std::string detail;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &detail, error_to_jump,
                                           warning_ignore);
  if (png == nullptr) throw Error(ErrorCode::Io, "libpng read struct allocation failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::Io, "libpng info struct allocation failed");
  }

  MemoryReader reader{bytes};
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  std::vector<std::uint8_t> raster;
  std::vector<png_bytep> rows;
  const auto status = read_png(png, info, reader, width, height, raster, rows, detail);
  png_destroy_read_struct(&png, &info, nullptr);

  switch (status) {
    case ReadStatus::Corrupt:
      throw Error(ErrorCode::CorruptStream, detail.empty() ? "malformed PNG" : detail);
    case ReadStatus::Unsupported:
      throw Error(ErrorCode::UnsupportedFormat, detail);
    case ReadStatus::Ok:
      break;
  }
  return RgbImage::from_interleaved(width, height, raster);
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, error_to_jump,
                                            warning_ignore);
  if (png == nullptr) throw Error(ErrorCode::Io, "libpng write struct allocation failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::Io, "libpng info struct allocation failed");
  }

  auto raster = img.interleaved();
  std::vector<png_bytep> rows(img.height());
  std::vector<std::uint8_t> out;
  const bool ok = write_png(png, info, img, raster, rows, out);
  png_destroy_write_struct(&png, &info);
  if (!ok) throw Error(ErrorCode::Io, "PNG encoding failed");
  return out;
}

}  // namespace cyclsteg::detail
