#include "cyclsteg/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

#include "cyclsteg/error.hpp"

namespace cyclsteg {

namespace {

void require_same_size(const RgbImage& a, const RgbImage& b) {
  if (!a.same_dimensions(b)) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
}

}  // namespace

double mse(const RgbImage& cover, const RgbImage& stego) {
  require_same_size(cover, stego);
  // Integer accumulation is exact up to ~2^64 / 255^2 samples.
  std::uint64_t sum = 0;
  for (const Channel c : kChannels) {
    const auto x = cover.plane(c);
    const auto y = stego.plane(c);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const std::int64_t d = static_cast<std::int64_t>(y[i]) - x[i];
      sum += static_cast<std::uint64_t>(d * d);
    }
  }
  return static_cast<double>(sum) / static_cast<double>(cover.sample_count());
}

double psnr_from_mse(double mse_value) noexcept {
  if (mse_value <= 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(static_cast<double>(kMaxIntensity) * kMaxIntensity / mse_value);
}

double psnr(const RgbImage& cover, const RgbImage& stego) {
  return psnr_from_mse(mse(cover, stego));
}

double ncc(const RgbImage& cover, const RgbImage& stego) {
  require_same_size(cover, stego);
  std::uint64_t cross = 0;
  std::uint64_t energy = 0;
  for (const Channel c : kChannels) {
    const auto x = cover.plane(c);
    const auto y = stego.plane(c);
    for (std::size_t i = 0; i < x.size(); ++i) {
      cross += static_cast<std::uint64_t>(y[i]) * x[i];
      energy += static_cast<std::uint64_t>(y[i]) * y[i];
    }
  }
  if (energy == 0) {
    throw Error(ErrorCode::DegenerateDenominator, "stego image is entirely zero");
  }
  return static_cast<double>(cross) / static_cast<double>(energy);
}

double ssim_plane(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) {
  const double n = static_cast<double>(x.size());
  double sum_x = 0.0;
  double sum_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum_x += x[i];
    sum_y += y[i];
  }
  const double mu_x = sum_x / n;
  const double mu_y = sum_y / n;

  double var_x = 0.0;
  double var_y = 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mu_x;
    const double dy = y[i] - mu_y;
    var_x += dx * dx;
    var_y += dy * dy;
    cov += dx * dy;
  }
  var_x /= n;
  var_y /= n;
  cov /= n;

  return ((2.0 * mu_x * mu_y + kSsimC1) * (2.0 * cov + kSsimC2)) /
         ((mu_x * mu_x + mu_y * mu_y + kSsimC1) * (var_x + var_y + kSsimC2));
}

double ssim(const RgbImage& cover, const RgbImage& stego) {
  require_same_size(cover, stego);
  double total = 0.0;
  for (const Channel c : kChannels) total += ssim_plane(cover.plane(c), stego.plane(c));
  return total / 3.0;
}

MetricReport evaluate(const RgbImage& cover, const RgbImage& stego) {
  MetricReport r;
  r.mse = mse(cover, stego);
  r.psnr = psnr_from_mse(r.mse);
  r.ncc = ncc(cover, stego);
  r.ssim = ssim(cover, stego);
  return r;
}

std::string format_value(double v) {
  if (std::isinf(v) && v > 0) return "inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_value(std::string_view text) {
  if (text == "inf") return kInfinitePsnr;
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw Error(ErrorCode::CorruptStream, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace cyclsteg
