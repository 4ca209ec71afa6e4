#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ballast/errors.hpp"

namespace ballast {

/// Row-major 2-D raster. A default-constructed image is empty (0x0) and is
/// only used as a placeholder; every other image has width, height >= 1.
template <typename T>
class Image {
 public:
  using value_type = T;

  Image() = default;

  Image(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::InvalidParameter, "image dimensions must be >= 1");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Image(int width, int height, std::vector<T> pixels) : Image(width, height) {
    if (pixels.size() != data_.size()) {
      throw Error(ErrorCode::ShapeMismatch, "pixel count does not match dimensions");
    }
    data_ = std::move(pixels);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool in_bounds(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<T> row(int y) noexcept { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
  std::span<const T> row(int y) const noexcept {
    return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
  }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }

  template <typename U>
  bool same_shape(const Image<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

using GrayImage = Image<double>;
using RgbImage = Image<Rgb>;
using BinaryMask = Image<std::uint8_t>;
using LabelMatrix = Image<std::int32_t>;

/// 8-connected neighbor offsets, scan order.
inline constexpr std::array<std::array<int, 2>, 8> kNeighbors8{{
    {-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1},
}};

/// Rec. 601 luma: 0.299 R + 0.587 G + 0.114 B.
GrayImage to_grayscale(const RgbImage& img);

/// Replicates intensities into all three channels.
RgbImage to_rgb(const GrayImage& img);

RgbImage to_rgb(const BinaryMask& mask);

/// Pointwise 1 - I.
GrayImage complement(const GrayImage& img);

template <typename T>
void require_same_shape(const Image<T>& a, const Image<T>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::ShapeMismatch, what);
  }
}

}  // namespace ballast
