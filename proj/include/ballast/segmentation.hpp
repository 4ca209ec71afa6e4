#pragma once

#include <cstdint>
#include <optional>

#include "ballast/image.hpp"
#include "ballast/morphology.hpp"

namespace ballast {

struct SegParams {
  int strel_radius = 14;
  int min_marker_area = 20;
  /// Replaces Otsu for the background split when set; intensity in [0,1].
  std::optional<double> fixed_threshold;

  friend bool operator==(const SegParams&, const SegParams&) = default;
};

struct MarkerSet {
  BinaryMask foreground;  // one blob per expected particle
  BinaryMask background;  // ridge skeleton between particles plus dark frame pixels
};

inline constexpr std::int32_t kRidgeLabel = 0;
inline constexpr std::int32_t kBackgroundLabel = 1;
inline constexpr std::int32_t kFirstParticleLabel = 2;

/// 3x3 Sobel magnitude sqrt(gx^2 + gy^2) / 8, border samples replicated.
GrayImage gradient_magnitude(const GrayImage& img);

/// Otsu split over 256 levels. Returns the intensity t such that pixels with
/// value > t form the bright class. Throws DegenerateHistogram when fewer
/// than two levels are populated.
double otsu_threshold(const GrayImage& img);

/// Euclidean distance from every pixel to the nearest true pixel of
/// `features` (exact, separable lower-envelope algorithm). Pixels of an
/// all-false mask get +infinity.
GrayImage distance_transform(const BinaryMask& features);

/// Opening by reconstruction followed by closing by reconstruction.
GrayImage open_close(const GrayImage& filtered, const DiskStrel& se);

/// Regional maxima of the opened/closed image, binary closing, binary
/// erosion (both with the layer disk), then removal of components below
/// min_marker_area. Throws EmptyMarkers when nothing survives or the image is flat.
BinaryMask foreground_markers_from_prepared(const GrayImage& prepared, const SegParams& p);

/// open_close followed by foreground_markers_from_prepared.
BinaryMask foreground_markers(const GrayImage& filtered, const SegParams& p);

/// Threshold the prepared image (Otsu unless overridden), watershed the
/// distance-to-foreground landscape, and keep its ridge pixels. Dark pixels
/// on the image frame are added so a lone particle cannot flood the field.
BinaryMask background_markers(const GrayImage& prepared, std::optional<double> fixed_threshold = std::nullopt);

/// Minima imposition: marker pixels become 0 and every other regional
/// minimum of `grad` is filled, by reconstruction by erosion of the marker
/// function over min(grad + 1/255, marker function).
GrayImage impose_minima(const GrayImage& grad, const BinaryMask& markers);

/// Marker-driven priority flood. Foreground components get labels >= 2 in
/// raster order, every background marker pixel gets label 1. Pixels are
/// popped by (flood level, insertion order); one that touches two labels at
/// pop time becomes ridge (0). Throws NoSeeds when both masks are empty.
LabelMatrix watershed(const GrayImage& relief, const MarkerSet& seeds);

/// Foreground and background markers from the opened/closed image. Foreground
/// components that never rise above the background threshold are dropped
/// (EmptyMarkers if none is left); the masks are made disjoint, foreground wins.
MarkerSet make_markers(const GrayImage& prepared, const SegParams& p);

/// Pointwise union of both marker masks.
BinaryMask marker_union(const MarkerSet& markers);

/// Everything the watershed needs for one image or layer.
struct PreparedRelief {
  GrayImage opened_closed;
  MarkerSet markers;
  GrayImage gradient;
  GrayImage relief;
};

PreparedRelief prepare_relief(const GrayImage& filtered, const SegParams& p);

/// Maps watershed output to particle labels: background and ridge -> 0,
/// particle label k >= 2 -> k - 1.
LabelMatrix particle_labels(const LabelMatrix& watershed_labels);

LabelMatrix segment_image(const GrayImage& filtered, const SegParams& p);

}  // namespace ballast
