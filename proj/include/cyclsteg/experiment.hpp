#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cyclsteg/image.hpp"
#include "cyclsteg/metrics.hpp"

namespace cyclsteg {

struct Dimensions {
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

/// Synthetic image seed.
struct SynthSeed {
  std::uint64_t value = 0;
  friend bool operator==(const SynthSeed&, const SynthSeed&) = default;
};

struct ImageSource {
  std::string name;
  std::variant<SynthSeed, std::filesystem::path> source;
};

/// Seeded uniform random bytes, or the leading bytes of a file.
struct RandomPayload {
  std::uint64_t seed = 0;
};
using PayloadSource = std::variant<RandomPayload, std::filesystem::path>;

/// Declarative description of one evaluation run.
///
/// perspective 1: several images, one payload size, common dimensions.
/// perspective 2: one image, payload sizes swept (rows sorted by size).
/// perspective 3: one image rendered at each entry of `dimensions`, one
///                payload size.
///
/// Synthetic images in perspectives 1 and 2 use dimensions.front(); file
/// images keep their own size in 1 and 2 and are nearest-neighbour resized
/// in 3. An empty `payload_sizes` with a file payload means "whole file".
struct ExperimentSpec {
  int perspective = 1;
  std::vector<ImageSource> images;
  std::vector<Dimensions> dimensions;
  std::vector<std::size_t> payload_sizes;
  PayloadSource payload = RandomPayload{};

  /// The built-in runs mirroring the three evaluation viewpoints.
  static ExperimentSpec defaults(int perspective, std::uint64_t seed);

  /// JSON spec file; relative paths resolve against `base_dir`.
  static ExperimentSpec from_json(std::string_view text, const std::filesystem::path& base_dir);
  static ExperimentSpec load(const std::filesystem::path& path);
};

/// Payload seed derived from a run seed so payload bytes never replay the
/// cover image's generator stream.
constexpr std::uint64_t payload_seed_for(std::uint64_t seed) noexcept {
  return seed ^ 0x9E3779B97F4A7C15ull;
}

/// `count` bytes, each the top 8 bits of one std::mt19937_64 draw.
std::vector<std::uint8_t> random_payload(std::uint64_t seed, std::size_t count);

struct ExperimentRow {
  std::string image_name;
  Dimensions dimensions;
  std::size_t payload_bytes = 0;
  MetricReport metrics;

  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

struct ExperimentTable {
  int perspective = 0;
  std::vector<ExperimentRow> rows;
  /// Column means. PSNR averages finite rows only; `psnr_excluded` counts the
  /// infinite ones. All-infinite tables report an infinite mean.
  MetricReport average;
  std::size_t psnr_excluded = 0;

  friend bool operator==(const ExperimentTable&, const ExperimentTable&) = default;
};

/// Computes column means for `table.rows` into `table.average`.
void summarise(ExperimentTable& table);

/// Checks shape and capacity before anything runs. Throws Error(InvalidSpec)
/// or CapacityError.
void validate(const ExperimentSpec& spec);

ExperimentTable run_perspective1(const ExperimentSpec& spec);
ExperimentTable run_perspective2(const ExperimentSpec& spec);
ExperimentTable run_perspective3(const ExperimentSpec& spec);
ExperimentTable run_experiment(const ExperimentSpec& spec);

/// image_name,width,height,payload_bytes,psnr,mse,ncc,ssim,row_kind,psnr_excluded
inline constexpr std::string_view kCsvHeader =
    "image_name,width,height,payload_bytes,psnr,mse,ncc,ssim,row_kind,psnr_excluded";

/// One metrics row in the base eight-column shape (no experiment columns).
std::string metrics_csv_row(std::string_view image_name, Dimensions dims,
                            std::size_t payload_bytes, const MetricReport& m);
inline constexpr std::string_view kMetricsCsvHeader =
    "image_name,width,height,payload_bytes,psnr,mse,ncc,ssim";

std::string to_csv(const ExperimentTable& table);
ExperimentTable parse_csv(std::string_view text, int perspective);
void write_csv(const ExperimentTable& table, const std::filesystem::path& destination);

/// Seeds, sizes, sources and format versions of a run, one key=value per line.
std::string manifest_text(const ExperimentSpec& spec, const ExperimentTable& table);
void write_manifest(const ExperimentSpec& spec, const ExperimentTable& table,
                    const std::filesystem::path& destination);

}  // namespace cyclsteg
