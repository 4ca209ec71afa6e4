#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ballast/image.hpp"

namespace ballast {

enum class Category : std::uint8_t { ConvexFail = 0, Small = 1, Typical = 2, Large = 3 };

std::string_view to_string(Category c);

/// Size calibration and screening thresholds. Sizes are r = area / ball_area_px.
struct CalibrationConfig {
  double ball_area_px = 2500.0;
  double convex_threshold = 0.73;
  double small_threshold = 0.11;
  double large_threshold = 7.069;

  friend bool operator==(const CalibrationConfig&, const CalibrationConfig&) = default;
};

/// Throws InvalidParameter naming the first bad field.
void validate(const CalibrationConfig& cal);

struct PixelPoint {
  int x = 0;
  int y = 0;

  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

struct Segment {
  std::int32_t label = 0;
  std::vector<PixelPoint> pixels;  // row-major order
};

/// One entry per distinct nonzero label, ascending by label.
std::vector<Segment> extract_segments(const LabelMatrix& labels);

/// Monotone-chain hull of the points, counter-clockwise (y up), without
/// collinear vertices. Fewer than 3 non-collinear points yield the distinct
/// extreme points only.
std::vector<PixelPoint> convex_hull(std::vector<PixelPoint> points);

struct HullMeasure {
  double area = 0.0;                  // shoelace area of the hull of pixel centers
  std::int64_t boundary_points = 0;   // lattice points on the hull perimeter
};

HullMeasure measure_hull(std::span<const PixelPoint> points);

/// Shoelace area of the hull of pixel centers; 0 for degenerate sets.
double convex_hull_area(std::span<const PixelPoint> points);

/// area_px / (hull.area + hull.boundary_points / 2 + 1), clamped to 1.
/// The denominator is the lattice-point count of the hull (Pick), so any
/// digitally convex pixel set scores exactly 1. Degenerate hulls (< 1 px^2) score 1.
double convexity_ratio(double area_px, const HullMeasure& hull);

/// ConvexFail if convexity < convex_threshold, else Small if r < small,
/// Large if r >= large, otherwise Typical.
Category classify_segment(double convexity, double r, const CalibrationConfig& cal);

struct SegmentRecord {
  std::int32_t label = 0;
  std::int64_t area_px = 0;
  double hull_area_px = 0.0;
  double convexity = 1.0;
  double r = 0.0;
  Category category = Category::Typical;

  friend bool operator==(const SegmentRecord&, const SegmentRecord&) = default;
};

/// Measures and classifies every labelled segment. Segments are measured in
/// parallel; output order is ascending label.
std::vector<SegmentRecord> measure_segments(const LabelMatrix& labels, const CalibrationConfig& cal);

/// PDS(%) = 100 * (1 - sum of Typical areas / image_area_px), clamped to [0, 100].
double compute_pds(std::span<const SegmentRecord> segments, double image_area_px);

struct CategoryTally {
  std::array<std::int64_t, 4> counts{};
  std::array<std::int64_t, 4> areas{};

  std::int64_t count(Category c) const { return counts[static_cast<std::size_t>(c)]; }
  std::int64_t area(Category c) const { return areas[static_cast<std::size_t>(c)]; }
};

CategoryTally tally(std::span<const SegmentRecord> segments);

enum class Mode : std::uint8_t { Stitched, Averaged };

std::string_view to_string(Mode m);
std::optional<Mode> mode_from_string(std::string_view name);

struct DegradationReport {
  Mode mode = Mode::Stitched;
  int width = 0;
  int height = 0;
  std::int64_t image_area_px = 0;
  std::vector<SegmentRecord> segments;
  std::int64_t typical_area_px = 0;
  std::int64_t unlabeled_px = 0;  // ridge and background pixels
  double pds_percent = 0.0;       // whole-image PDS
  std::optional<std::array<double, 3>> per_layer_pds;
  double final_pds = 0.0;  // stitched: pds_percent; averaged: mean of per_layer_pds
  std::string params_digest;

  CategoryTally category_tally() const { return tally(segments); }
};

}  // namespace ballast
