#include <algorithm>
#include <cmath>
#include <vector>

#include "ballast/log.hpp"
#include "ballast/preprocess.hpp"

namespace ballast {

int bilateral_radius(double sigma_s) { return static_cast<int>(std::ceil(2.0 * sigma_s)); }

GrayImage bilateral_filter(const GrayImage& img, const BilateralParams& p) {
  if (!(p.sigma_s > 0.0) || !(p.sigma_r > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "sigma_s and sigma_r must be > 0");
  }
  if (p.sigma_s > kSigmaSAdvisoryMax || p.sigma_r > kSigmaRAdvisoryMax) {
    spdlog::warn("bilateral sigma_s={} sigma_r={} above recommended maxima ({}, {})", p.sigma_s, p.sigma_r,
                 kSigmaSAdvisoryMax, kSigmaRAdvisoryMax);
  }

  const int radius = bilateral_radius(p.sigma_s);
  const int span = 2 * radius + 1;
  const double sigma_r = p.sigma_r / 255.0;
  const double inv_2r2 = 1.0 / (2.0 * sigma_r * sigma_r);

  // Spatial exponent per window offset; the range term is added per pair so
  // each weight costs a single exp().
  std::vector<double> spatial(static_cast<std::size_t>(span) * span);
  const double inv_2s2 = 1.0 / (2.0 * p.sigma_s * p.sigma_s);
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      spatial[static_cast<std::size_t>(dy + radius) * span + (dx + radius)] = -(dx * dx + dy * dy) * inv_2s2;
    }
  }

  const int width = img.width();
  const int height = img.height();
  GrayImage out(width, height);

#pragma omp parallel for schedule(dynamic, 4)
  for (int y = 0; y < height; ++y) {
    const int y0 = std::max(0, y - radius);
    const int y1 = std::min(height - 1, y + radius);
    for (int x = 0; x < width; ++x) {
      const int x0 = std::max(0, x - radius);
      const int x1 = std::min(width - 1, x + radius);
      const double center = img(x, y);
      double num = 0.0;
      double den = 0.0;
      for (int qy = y0; qy <= y1; ++qy) {
        const double* src = img.row(qy).data();
        const double* ker = spatial.data() + static_cast<std::size_t>(qy - y + radius) * span + radius - x;
        for (int qx = x0; qx <= x1; ++qx) {
          const double diff = src[qx] - center;
          const double w = std::exp(ker[qx] - diff * diff * inv_2r2);
          num += w * src[qx];
          den += w;
        }
      }
      out(x, y) = num / den;
    }
  }
  return out;
}

}  // namespace ballast
