#include "ballast/layers.hpp"

#include <string>

namespace ballast {

std::array<LayerBand, 3> layer_bands(int height) {
  if (height < 3) {
    throw Error(ErrorCode::ImageTooSmall, "height " + std::to_string(height) + " < 3 cannot be split into layers");
  }
  const int third = height / 3;
  return {{
      {Layer::Top, 0, third},
      {Layer::Middle, third, 2 * third},
      {Layer::Bottom, 2 * third, height},
  }};
}

LayerSplit split_layers(const GrayImage& img) {
  LayerSplit split;
  split.bands = layer_bands(img.height());
  for (std::size_t i = 0; i < 3; ++i) {
    split.images[i] = crop_rows(img, split.bands[i]);
  }
  return split;
}

GrayImage stitch_layers(const GrayImage& top, const GrayImage& mid, const GrayImage& bot) {
  return stitch_rows(top, mid, bot);
}

}  // namespace ballast
