#include <algorithm>
#include <array>
#include <cmath>

#include "ballast/imageio.hpp"
#include "ballast/preprocess.hpp"

namespace ballast {

GrayImage adjust_tone(const GrayImage& img, const ToneParams& p) {
  if (!(p.gamma > 0.0) || !(p.brightness_gain > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "gamma and brightness_gain must be > 0");
  }
  GrayImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double v = std::max(img[i], 0.0);
    out[i] = std::clamp(std::pow(v, p.gamma) * p.brightness_gain, 0.0, 1.0);
  }
  return out;
}

GrayImage histogram_match(const GrayImage& input, const GrayImage& reference) {
  constexpr int kLevels = 256;
  std::array<double, kLevels> in_cdf{};
  std::array<double, kLevels> ref_cdf{};
  std::array<double, kLevels> ref_sum{};
  std::array<std::size_t, kLevels> ref_count{};

  for (double v : input.pixels()) {
    in_cdf[quantize8(v)] += 1.0;
  }
  for (double v : reference.pixels()) {
    const auto level = quantize8(v);
    ref_count[level] += 1;
    ref_sum[level] += std::clamp(v, 0.0, 1.0);
  }
  for (int k = 0; k < kLevels; ++k) {
    ref_cdf[k] = static_cast<double>(ref_count[k]);
  }
  for (int k = 1; k < kLevels; ++k) {
    in_cdf[k] += in_cdf[k - 1];
    ref_cdf[k] += ref_cdf[k - 1];
  }
  const double in_total = in_cdf[kLevels - 1];
  const double ref_total = ref_cdf[kLevels - 1];

  // Compare fractions by cross-multiplying counts so equal proportions match exactly.
  std::array<double, kLevels> mapped{};
  int j = 0;
  for (int k = 0; k < kLevels; ++k) {
    while (j < kLevels - 1 && ref_cdf[j] * in_total < in_cdf[k] * ref_total) {
      ++j;
    }
    mapped[k] = ref_count[j] > 0 ? ref_sum[j] / static_cast<double>(ref_count[j]) : j / 255.0;
  }

  GrayImage out(input.width(), input.height());
  for (std::size_t i = 0; i < input.size(); ++i) {
    out[i] = mapped[quantize8(input[i])];
  }
  return out;
}

}  // namespace ballast
