#include "ballast/image.hpp"

namespace ballast {

GrayImage to_grayscale(const RgbImage& img) {
  GrayImage out(img.width(), img.height());
  const auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = 0.299 * src[i].r + 0.587 * src[i].g + 0.114 * src[i].b;
  }
  return out;
}

RgbImage to_rgb(const GrayImage& img) {
  RgbImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    out[i] = {img[i], img[i], img[i]};
  }
  return out;
}

RgbImage to_rgb(const BinaryMask& mask) {
  RgbImage out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double v = mask[i] ? 1.0 : 0.0;
    out[i] = {v, v, v};
  }
  return out;
}

GrayImage complement(const GrayImage& img) {
  GrayImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    out[i] = 1.0 - img[i];
  }
  return out;
}

}  // namespace ballast
