#include <algorithm>
#include <cmath>

#include "ballast/segmentation.hpp"

namespace ballast {

GrayImage gradient_magnitude(const GrayImage& img) {
  const int width = img.width();
  const int height = img.height();
  GrayImage out(width, height);

#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const auto up = img.row(std::max(y - 1, 0));
    const auto mid = img.row(y);
    const auto down = img.row(std::min(y + 1, height - 1));
    for (int x = 0; x < width; ++x) {
      const int l = std::max(x - 1, 0);
      const int r = std::min(x + 1, width - 1);
      const double gx = (up[r] + 2.0 * mid[r] + down[r]) - (up[l] + 2.0 * mid[l] + down[l]);
      const double gy = (down[l] + 2.0 * down[x] + down[r]) - (up[l] + 2.0 * up[x] + up[r]);
      out(x, y) = std::sqrt(gx * gx + gy * gy) / 8.0;
    }
  }
  return out;
}

}  // namespace ballast
