#include <algorithm>

#include "ballast/analysis.hpp"

namespace ballast {

double compute_pds(std::span<const SegmentRecord> segments, double image_area_px) {
  if (!(image_area_px > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "image area must be > 0");
  }
  double typical = 0.0;
  for (const auto& s : segments) {
    if (s.category == Category::Typical) typical += static_cast<double>(s.area_px);
  }
  return std::clamp(100.0 * (1.0 - typical / image_area_px), 0.0, 100.0);
}

}  // namespace ballast
