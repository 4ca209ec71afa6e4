#pragma once

#include <array>

#include "ballast/image.hpp"

namespace ballast {

/// Rows [row_start, row_end) of the full image.
struct LayerBand {
  Layer index = Layer::Top;
  int row_start = 0;
  int row_end = 0;

  int rows() const noexcept { return row_end - row_start; }
  friend bool operator==(const LayerBand&, const LayerBand&) = default;
};

/// Top and middle get floor(H/3) rows, bottom takes the remainder.
/// Throws ImageTooSmall when H < 3.
std::array<LayerBand, 3> layer_bands(int height);

template <typename T>
Image<T> crop_rows(const Image<T>& img, const LayerBand& band) {
  Image<T> out(img.width(), band.rows());
  for (int y = 0; y < band.rows(); ++y) {
    const auto src = img.row(band.row_start + y);
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

/// Vertical concatenation, top to bottom. Throws WidthMismatch.
template <typename T>
Image<T> stitch_rows(const Image<T>& top, const Image<T>& mid, const Image<T>& bot) {
  if (top.width() != mid.width() || top.width() != bot.width()) {
    throw Error(ErrorCode::WidthMismatch, "layer widths " + std::to_string(top.width()) + ", " +
                                              std::to_string(mid.width()) + ", " + std::to_string(bot.width()));
  }
  Image<T> out(top.width(), top.height() + mid.height() + bot.height());
  int y0 = 0;
  for (const Image<T>* part : {&top, &mid, &bot}) {
    for (int y = 0; y < part->height(); ++y) {
      const auto src = part->row(y);
      std::copy(src.begin(), src.end(), out.row(y0 + y).begin());
    }
    y0 += part->height();
  }
  return out;
}

struct LayerSplit {
  std::array<GrayImage, 3> images;
  std::array<LayerBand, 3> bands;
};

LayerSplit split_layers(const GrayImage& img);

GrayImage stitch_layers(const GrayImage& top, const GrayImage& mid, const GrayImage& bot);

}  // namespace ballast
