#pragma once

#include <array>
#include <vector>

#include "ballast/image.hpp"

namespace ballast {

/// Disk-shaped structuring element: all offsets with dx^2 + dy^2 <= radius^2.
class DiskStrel {
 public:
  explicit DiskStrel(int radius);

  int radius() const noexcept { return radius_; }
  const std::vector<std::array<int, 2>>& offsets() const noexcept { return offsets_; }

  /// Half-width of the disk's row at vertical offset dy, |dy| <= radius.
  int half_width(int dy) const noexcept { return half_widths_[static_cast<std::size_t>(dy + radius_)]; }

 private:
  int radius_;
  std::vector<std::array<int, 2>> offsets_;
  std::vector<int> half_widths_;
};

// Erosion and dilation clip the neighborhood at the image border, which is
// the same as padding with +inf (erosion) or -inf (dilation).
GrayImage erode(const GrayImage& img, const DiskStrel& se);
GrayImage dilate(const GrayImage& img, const DiskStrel& se);
BinaryMask erode(const BinaryMask& mask, const DiskStrel& se);
BinaryMask dilate(const BinaryMask& mask, const DiskStrel& se);

/// Binary closing: dilation followed by erosion with the same element.
BinaryMask close(const BinaryMask& mask, const DiskStrel& se);

/// Grayscale reconstruction by dilation of `marker` under `mask` (8-connected),
/// computed with the hybrid raster-sweep + FIFO algorithm. The result is the
/// fixpoint of J <- min(dilate3x3(J), mask) starting from J = marker.
/// Throws MarkerExceedsMask (with the first offending coordinate) if marker > mask anywhere.
GrayImage reconstruct(const GrayImage& marker, const GrayImage& mask);

/// Dual of reconstruct: requires marker >= mask; computed as -reconstruct(-marker, -mask).
GrayImage reconstruct_by_erosion(const GrayImage& marker, const GrayImage& mask);

/// reconstruct(erode(img, se), img)
GrayImage open_by_reconstruction(const GrayImage& img, const DiskStrel& se);

/// reconstruct_by_erosion(dilate(img, se), img), the complement-space dual of
/// opening: equal to 1 - open_by_reconstruction(1 - img) wherever 1 - x is exact.
GrayImage close_by_reconstruction(const GrayImage& img, const DiskStrel& se);

/// 8-connected plateaus whose every exterior neighbor is strictly lower.
/// A constant image is one plateau with no exterior, so every pixel is marked.
BinaryMask regional_maxima(const GrayImage& img);

/// 8-connected plateaus whose every exterior neighbor is strictly higher.
BinaryMask regional_minima(const GrayImage& img);

struct ComponentLabels {
  LabelMatrix labels;  // 0 = background, 1..count in raster order of first pixel
  int count = 0;
};

/// 8-connected components of the true pixels.
ComponentLabels label_components(const BinaryMask& mask);

/// Drops 8-connected components with fewer than `min_area` pixels.
BinaryMask remove_small_components(const BinaryMask& mask, int min_area);

}  // namespace ballast
