#pragma once

#include "ballast/image.hpp"

namespace ballast {

struct ToneParams {
  double gamma = 1.0;
  double brightness_gain = 1.0;  // 1.0 = unchanged

  friend bool operator==(const ToneParams&, const ToneParams&) = default;
};

/// sigma_s in pixels, sigma_r on the 8-bit (0..255) intensity scale.
struct BilateralParams {
  double sigma_s = 6.0;
  double sigma_r = 8.0;

  friend bool operator==(const BilateralParams&, const BilateralParams&) = default;
};

/// Recommended upper bounds; exceeding them only logs a warning.
inline constexpr double kSigmaSAdvisoryMax = 20.0;
inline constexpr double kSigmaRAdvisoryMax = 10.0;

/// out = clamp(in^gamma * gain, 0, 1). Throws InvalidParameter for gamma <= 0 or gain <= 0.
GrayImage adjust_tone(const GrayImage& img, const ToneParams& p);

/// Monotone quantile mapping of `input` onto the histogram of `reference`
/// over 256 levels. Each input level k maps to the lowest reference level j
/// whose cumulative count reaches that of k; the output value is the mean of
/// the reference pixels that fall in level j.
GrayImage histogram_match(const GrayImage& input, const GrayImage& reference);

/// Half-width of the square bilateral window: ceil(2 * sigma_s).
int bilateral_radius(double sigma_s);

/// Direct evaluation of the bilateral filter
///   BF[I]_p = 1/w_p * sum_q Gs(|p-q|) Gr(|I_p - I_q|) I_q
/// over a (2R+1)^2 window clipped at the borders, R = bilateral_radius(sigma_s).
/// Rows are filtered in parallel; output does not depend on scheduling.
GrayImage bilateral_filter(const GrayImage& img, const BilateralParams& p);

}  // namespace ballast
