#pragma once

#include <array>
#include <span>

#include "ballast/analysis.hpp"
#include "ballast/image.hpp"

namespace ballast {

inline constexpr int kColorKeySize = 64;

/// Returned by color_index for segments that failed the convexity screen.
inline constexpr int kDegradedZoneIndex = -1;

// Index bands of the 64-entry key.
inline constexpr int kSmallBandFirst = 1;
inline constexpr int kSmallBandLast = 3;
inline constexpr int kTypicalBandFirst = 4;
inline constexpr int kTypicalBandLast = 55;
inline constexpr int kLargeBandFirst = 56;
inline constexpr int kLargeBandLast = 64;

// Quantization steps of the size coding.
inline constexpr double kSmallStep = 0.0367;
inline constexpr double kTypicalStep = 0.13645;
inline constexpr double kLargeStep = 0.5;
inline constexpr double kLargeBase = 7.069;
inline constexpr double kOversizeR = 11.569;

struct ColorKey {
  std::array<Rgb, kColorKeySize> entries{};  // entries[i - 1] is index i
  Rgb ridge{1.0, 1.0, 1.0};
  Rgb degraded_zone{0.5, 0.0, 0.5};

  const Rgb& at(int index) const { return entries.at(static_cast<std::size_t>(index - 1)); }

  friend bool operator==(const ColorKey&, const ColorKey&) = default;
};

/// Greens (1-3, dark to light), yellow -> red -> brown (4-55), blues (56-64, light to dark).
ColorKey default_color_key();

/// Key index for a classified segment:
///   ConvexFail -> kDegradedZoneIndex
///   Small      -> clamp(ceil(r / 0.0367), 1, 3)
///   Typical    -> clamp(3 + ceil(r / 0.13645), 4, 55)
///   Large      -> clamp(55 + ceil((r - 7.069) / 0.5), 56, 63) below r = 11.569, else 64
int color_index(Category category, double r);

/// Label 0 -> ridge color, ConvexFail -> degraded-zone color, otherwise the
/// key entry of the segment's color index. Throws MissingRecord for a label
/// without a record.
RgbImage render_labels(const LabelMatrix& labels, std::span<const SegmentRecord> records, const ColorKey& key);

}  // namespace ballast
