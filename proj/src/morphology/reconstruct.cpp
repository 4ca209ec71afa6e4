#include <algorithm>
#include <deque>
#include <string>

#include "ballast/morphology.hpp"

namespace ballast {

namespace {

// Raster-order predecessors (N+) and successors (N-) of a pixel, 8-connected.
constexpr std::array<std::array<int, 2>, 4> kPrev{{{-1, -1}, {0, -1}, {1, -1}, {-1, 0}}};
constexpr std::array<std::array<int, 2>, 4> kNext{{{1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

}  // namespace

GrayImage reconstruct(const GrayImage& marker, const GrayImage& mask) {
  require_same_shape(marker, mask, "reconstruct: marker and mask shapes differ");
  const int width = mask.width();
  const int height = mask.height();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (marker(x, y) > mask(x, y)) {
        throw Error(ErrorCode::MarkerExceedsMask,
                    "marker > mask at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
      }
    }
  }

  GrayImage out = marker;

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = out(x, y);
      for (const auto& [dx, dy] : kPrev) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (out.in_bounds(nx, ny)) v = std::max(v, out(nx, ny));
      }
      out(x, y) = std::min(v, mask(x, y));
    }
  }

  std::deque<std::size_t> fifo;
  for (int y = height - 1; y >= 0; --y) {
    for (int x = width - 1; x >= 0; --x) {
      double v = out(x, y);
      for (const auto& [dx, dy] : kNext) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (out.in_bounds(nx, ny)) v = std::max(v, out(nx, ny));
      }
      v = std::min(v, mask(x, y));
      out(x, y) = v;
      for (const auto& [dx, dy] : kNext) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (out.in_bounds(nx, ny) && out(nx, ny) < v && out(nx, ny) < mask(nx, ny)) {
          fifo.push_back(out.index(x, y));
          break;
        }
      }
    }
  }

  while (!fifo.empty()) {
    const std::size_t p = fifo.front();
    fifo.pop_front();
    const int x = static_cast<int>(p % static_cast<std::size_t>(width));
    const int y = static_cast<int>(p / static_cast<std::size_t>(width));
    const double v = out[p];
    for (const auto& [dx, dy] : kNeighbors8) {
      const int nx = x + dx;
      const int ny = y + dy;
      if (!out.in_bounds(nx, ny)) continue;
      const std::size_t q = out.index(nx, ny);
      if (out[q] < v && out[q] != mask[q]) {
        out[q] = std::min(v, mask[q]);
        fifo.push_back(q);
      }
    }
  }
  return out;
}

GrayImage reconstruct_by_erosion(const GrayImage& marker, const GrayImage& mask) {
  require_same_shape(marker, mask, "reconstruct_by_erosion: marker and mask shapes differ");
  GrayImage neg_marker(marker.width(), marker.height());
  GrayImage neg_mask(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    neg_marker[i] = -marker[i];
    neg_mask[i] = -mask[i];
  }
  GrayImage out = reconstruct(neg_marker, neg_mask);
  for (double& v : out.pixels()) {
    v = -v;
  }
  return out;
}

GrayImage open_by_reconstruction(const GrayImage& img, const DiskStrel& se) {
  return reconstruct(erode(img, se), img);
}

// Negation is exact, so the result only ever takes values present in `img`.
// Going through 1 - x instead can land one ulp below the input.
GrayImage close_by_reconstruction(const GrayImage& img, const DiskStrel& se) {
  return reconstruct_by_erosion(dilate(img, se), img);
}

}  // namespace ballast
