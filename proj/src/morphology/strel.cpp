#include <string>

#include "ballast/morphology.hpp"

namespace ballast {

DiskStrel::DiskStrel(int radius) : radius_(radius) {
  if (radius < 1) {
    throw Error(ErrorCode::InvalidParameter, "strel radius must be >= 1, got " + std::to_string(radius));
  }
  const int r2 = radius * radius;
  half_widths_.resize(static_cast<std::size_t>(2 * radius + 1));
  for (int dy = -radius; dy <= radius; ++dy) {
    int w = 0;
    while ((w + 1) * (w + 1) + dy * dy <= r2) {
      ++w;
    }
    half_widths_[static_cast<std::size_t>(dy + radius)] = w;
    for (int dx = -w; dx <= w; ++dx) {
      offsets_.push_back({dx, dy});
    }
  }
}

}  // namespace ballast
