#pragma once

#include <limits>
#include <string>
#include <string_view>

#include "cyclsteg/image.hpp"

namespace cyclsteg {

/// PSNR of two identical images.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// SSIM stabilisers for L = 255: C1 = (0.01 L)^2, C2 = (0.03 L)^2.
inline constexpr double kSsimC1 = (0.01 * kMaxIntensity) * (0.01 * kMaxIntensity);
inline constexpr double kSsimC2 = (0.03 * kMaxIntensity) * (0.03 * kMaxIntensity);

struct MetricReport {
  double psnr = kInfinitePsnr;
  double mse = 0.0;
  double ncc = 1.0;
  double ssim = 1.0;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

/// Mean squared error pooled over all 3*W*H samples.
double mse(const RgbImage& cover, const RgbImage& stego);

/// 10 log10(255^2 / mse); kInfinitePsnr when mse == 0.
double psnr_from_mse(double mse_value) noexcept;
double psnr(const RgbImage& cover, const RgbImage& stego);

/// sum(S*C) / sum(S*S) over all samples, S = stego. Not symmetric and not
/// bounded by 1. Throws Error(DegenerateDenominator) for an all-zero stego.
double ncc(const RgbImage& cover, const RgbImage& stego);

/// Single-window SSIM on one plane using whole-plane means, population
/// variances and covariance.
double ssim_plane(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y);

/// Mean of the three per-plane SSIM scores.
double ssim(const RgbImage& cover, const RgbImage& stego);

/// All four metrics. Every function throws Error(DimensionMismatch) when
/// the images differ in size.
MetricReport evaluate(const RgbImage& cover, const RgbImage& stego);

/// Shortest decimal text that parses back to the same double; "inf" for
/// +infinity. Used for every metric written to stdout or CSV.
std::string format_value(double v);
double parse_value(std::string_view text);

}  // namespace cyclsteg
