#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "ballast/colorcode.hpp"

namespace ballast {

namespace {

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

// Clamped before the cast so out-of-band sizes cannot overflow.
int ceil_index(double v) { return static_cast<int>(std::ceil(std::clamp(v, -1.0e6, 1.0e6))); }

}  // namespace

ColorKey default_color_key() {
  ColorKey key;
  const Rgb dark_green{0.0, 0.39, 0.0};
  const Rgb light_green{0.56, 0.93, 0.56};
  for (int i = kSmallBandFirst; i <= kSmallBandLast; ++i) {
    const double t = static_cast<double>(i - kSmallBandFirst) / (kSmallBandLast - kSmallBandFirst);
    key.entries[static_cast<std::size_t>(i - 1)] = lerp(dark_green, light_green, t);
  }

  const Rgb yellow{1.0, 1.0, 0.0};
  const Rgb red{1.0, 0.0, 0.0};
  const Rgb brown{0.4, 0.2, 0.0};
  const int typical_span = kTypicalBandLast - kTypicalBandFirst;
  for (int i = kTypicalBandFirst; i <= kTypicalBandLast; ++i) {
    const double t = static_cast<double>(i - kTypicalBandFirst) / typical_span;
    key.entries[static_cast<std::size_t>(i - 1)] = t <= 0.5 ? lerp(yellow, red, t * 2.0) : lerp(red, brown, t * 2.0 - 1.0);
  }

  const Rgb light_blue{0.68, 0.85, 1.0};
  const Rgb dark_blue{0.0, 0.0, 0.55};
  for (int i = kLargeBandFirst; i <= kLargeBandLast; ++i) {
    const double t = static_cast<double>(i - kLargeBandFirst) / (kLargeBandLast - kLargeBandFirst);
    key.entries[static_cast<std::size_t>(i - 1)] = lerp(light_blue, dark_blue, t);
  }
  return key;
}

int color_index(Category category, double r) {
  switch (category) {
    case Category::ConvexFail:
      return kDegradedZoneIndex;
    case Category::Small:
      return std::clamp(ceil_index(r / kSmallStep), kSmallBandFirst, kSmallBandLast);
    case Category::Typical:
      return std::clamp(kSmallBandLast + ceil_index(r / kTypicalStep), kTypicalBandFirst, kTypicalBandLast);
    case Category::Large:
      if (r >= kOversizeR) return kLargeBandLast;
      return std::clamp(kTypicalBandLast + ceil_index((r - kLargeBase) / kLargeStep), kLargeBandFirst,
                        kLargeBandLast - 1);
  }
  return kDegradedZoneIndex;
}

RgbImage render_labels(const LabelMatrix& labels, std::span<const SegmentRecord> records, const ColorKey& key) {
  std::unordered_map<std::int32_t, Rgb> colors;
  colors.reserve(records.size());
  for (const auto& rec : records) {
    const int idx = color_index(rec.category, rec.r);
    colors.emplace(rec.label, idx == kDegradedZoneIndex ? key.degraded_zone : key.at(idx));
  }

  RgbImage out(labels.width(), labels.height());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto label = labels[i];
    if (label == 0) {
      out[i] = key.ridge;
      continue;
    }
    const auto it = colors.find(label);
    if (it == colors.end()) {
      throw Error(ErrorCode::MissingRecord, "label " + std::to_string(label) + " has no segment record");
    }
    out[i] = it->second;
  }
  return out;
}

}  // namespace ballast
