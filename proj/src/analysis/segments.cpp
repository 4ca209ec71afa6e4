#include <algorithm>
#include <map>
#include <string>

#include "ballast/analysis.hpp"

namespace ballast {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::ConvexFail: return "convex_fail";
    case Category::Small: return "small";
    case Category::Typical: return "typical";
    case Category::Large: return "large";
  }
  return "unknown";
}

std::string_view to_string(Mode m) { return m == Mode::Stitched ? "stitched" : "averaged"; }

std::optional<Mode> mode_from_string(std::string_view name) {
  if (name == "stitched") return Mode::Stitched;
  if (name == "averaged") return Mode::Averaged;
  return std::nullopt;
}

void validate(const CalibrationConfig& cal) {
  if (!(cal.ball_area_px > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "calibration.ball_area_px must be > 0");
  }
  if (!(cal.convex_threshold > 0.0 && cal.convex_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "calibration.convex_threshold must be in (0, 1]");
  }
  if (!(cal.small_threshold > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "calibration.small_threshold must be > 0");
  }
  if (!(cal.large_threshold > cal.small_threshold)) {
    throw Error(ErrorCode::InvalidParameter, "calibration.large_threshold must exceed small_threshold");
  }
}

std::vector<Segment> extract_segments(const LabelMatrix& labels) {
  std::map<std::int32_t, std::vector<PixelPoint>> by_label;
  for (int y = 0; y < labels.height(); ++y) {
    const auto row = labels.row(y);
    for (int x = 0; x < labels.width(); ++x) {
      if (row[x] != 0) by_label[row[x]].push_back({x, y});
    }
  }
  std::vector<Segment> out;
  out.reserve(by_label.size());
  for (auto& [label, pixels] : by_label) {
    out.push_back({label, std::move(pixels)});
  }
  return out;
}

Category classify_segment(double convexity, double r, const CalibrationConfig& cal) {
  if (convexity < cal.convex_threshold) return Category::ConvexFail;
  if (r < cal.small_threshold) return Category::Small;
  if (r >= cal.large_threshold) return Category::Large;
  return Category::Typical;
}

std::vector<SegmentRecord> measure_segments(const LabelMatrix& labels, const CalibrationConfig& cal) {
  validate(cal);
  const auto segments = extract_segments(labels);
  std::vector<SegmentRecord> records(segments.size());

#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& seg = segments[i];
    // The hull of a pixel set equals the hull of its per-row extremes.
    std::vector<PixelPoint> extremes;
    for (std::size_t j = 0; j < seg.pixels.size();) {
      std::size_t end = j;
      while (end + 1 < seg.pixels.size() && seg.pixels[end + 1].y == seg.pixels[j].y) ++end;
      extremes.push_back(seg.pixels[j]);
      if (end != j) extremes.push_back(seg.pixels[end]);
      j = end + 1;
    }
    const HullMeasure hull = measure_hull(extremes);
    SegmentRecord& rec = records[i];
    rec.label = seg.label;
    rec.area_px = static_cast<std::int64_t>(seg.pixels.size());
    rec.hull_area_px = hull.area;
    rec.convexity = convexity_ratio(static_cast<double>(rec.area_px), hull);
    rec.r = static_cast<double>(rec.area_px) / cal.ball_area_px;
    rec.category = classify_segment(rec.convexity, rec.r, cal);
  }
  return records;
}

CategoryTally tally(std::span<const SegmentRecord> segments) {
  CategoryTally t;
  for (const auto& s : segments) {
    const auto c = static_cast<std::size_t>(s.category);
    ++t.counts[c];
    t.areas[c] += s.area_px;
  }
  return t;
}

}  // namespace ballast
