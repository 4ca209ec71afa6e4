#include <algorithm>
#include <string>
#include <vector>

#include "ballast/segmentation.hpp"

namespace ballast {

GrayImage open_close(const GrayImage& filtered, const DiskStrel& se) {
  return close_by_reconstruction(open_by_reconstruction(filtered, se), se);
}

BinaryMask foreground_markers_from_prepared(const GrayImage& prepared, const SegParams& p) {
  const auto [lo, hi] = std::minmax_element(prepared.pixels().begin(), prepared.pixels().end());
  if (*lo == *hi) {
    // A flat image is one global maximum with no exterior: no particle to seed.
    throw Error(ErrorCode::EmptyMarkers, "prepared image is flat");
  }
  const DiskStrel se(p.strel_radius);
  BinaryMask markers = regional_maxima(prepared);
  markers = close(markers, se);
  markers = erode(markers, se);
  markers = remove_small_components(markers, p.min_marker_area);
  if (std::none_of(markers.pixels().begin(), markers.pixels().end(), [](std::uint8_t v) { return v != 0; })) {
    throw Error(ErrorCode::EmptyMarkers, "no foreground marker survives strel radius " +
                                             std::to_string(p.strel_radius) + "; reduce the strel radius");
  }
  return markers;
}

BinaryMask foreground_markers(const GrayImage& filtered, const SegParams& p) {
  return foreground_markers_from_prepared(open_close(filtered, DiskStrel(p.strel_radius)), p);
}

BinaryMask background_markers(const GrayImage& prepared, std::optional<double> fixed_threshold) {
  const double threshold = fixed_threshold ? *fixed_threshold : otsu_threshold(prepared);
  BinaryMask bright(prepared.width(), prepared.height(), 0);
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    bright[i] = prepared[i] > threshold ? 1 : 0;
  }

  // The bright blobs are exactly the zero set (and the only minima) of the
  // distance landscape, so they seed its watershed directly.
  BinaryMask out(prepared.width(), prepared.height(), 0);
  if (std::any_of(bright.pixels().begin(), bright.pixels().end(), [](std::uint8_t v) { return v != 0; })) {
    const GrayImage distance = distance_transform(bright);
    const BinaryMask none(prepared.width(), prepared.height(), 0);
    const LabelMatrix zones = watershed(distance, MarkerSet{bright, none});
    for (std::size_t i = 0; i < zones.size(); ++i) {
      out[i] = zones[i] == kRidgeLabel ? 1 : 0;
    }
  }
  const int w = prepared.width();
  const int h = prepared.height();
  auto mark_frame = [&](int x, int y) {
    if (!bright(x, y)) out(x, y) = 1;
  };
  for (int x = 0; x < w; ++x) {
    mark_frame(x, 0);
    mark_frame(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    mark_frame(0, y);
    mark_frame(w - 1, y);
  }
  return out;
}

GrayImage impose_minima(const GrayImage& grad, const BinaryMask& markers) {
  if (!grad.same_shape(markers)) {
    throw Error(ErrorCode::ShapeMismatch, "impose_minima: gradient and markers differ in shape");
  }
  constexpr double kEpsilon = 1.0 / 255.0;
  const double top = *std::max_element(grad.pixels().begin(), grad.pixels().end()) + 1.0;

  GrayImage marker_fn(grad.width(), grad.height());
  GrayImage mask(grad.width(), grad.height());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    marker_fn[i] = markers[i] ? 0.0 : top;
    mask[i] = std::min(grad[i] + kEpsilon, marker_fn[i]);
  }
  return reconstruct_by_erosion(marker_fn, mask);
}

MarkerSet make_markers(const GrayImage& prepared, const SegParams& p) {
  MarkerSet out;
  out.foreground = foreground_markers_from_prepared(prepared, p);
  const double threshold = p.fixed_threshold ? *p.fixed_threshold : otsu_threshold(prepared);

  // Plateaus of the flattened dark field (mostly along the frame, where the
  // clipped erosion cannot shrink them) would otherwise seed phantom particles.
  const ComponentLabels comps = label_components(out.foreground);
  std::vector<bool> on_bright(static_cast<std::size_t>(comps.count) + 1, false);
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    if (comps.labels[i] != 0 && prepared[i] > threshold) on_bright[static_cast<std::size_t>(comps.labels[i])] = true;
  }
  bool any = false;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    const bool keep = comps.labels[i] != 0 && on_bright[static_cast<std::size_t>(comps.labels[i])];
    out.foreground[i] = keep ? 1 : 0;
    any = any || keep;
  }
  if (!any) {
    throw Error(ErrorCode::EmptyMarkers, "no foreground marker lies above the intensity threshold");
  }

  out.background = background_markers(prepared, threshold);
  for (std::size_t i = 0; i < out.background.size(); ++i) {
    if (out.foreground[i]) out.background[i] = 0;
  }
  return out;
}

BinaryMask marker_union(const MarkerSet& markers) {
  BinaryMask all(markers.foreground.width(), markers.foreground.height(), 0);
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i] = (markers.foreground[i] || markers.background[i]) ? 1 : 0;
  }
  return all;
}

PreparedRelief prepare_relief(const GrayImage& filtered, const SegParams& p) {
  PreparedRelief out;
  out.opened_closed = open_close(filtered, DiskStrel(p.strel_radius));
  out.markers = make_markers(out.opened_closed, p);
  out.gradient = gradient_magnitude(filtered);
  out.relief = impose_minima(out.gradient, marker_union(out.markers));
  return out;
}

LabelMatrix particle_labels(const LabelMatrix& watershed_labels) {
  LabelMatrix out(watershed_labels.width(), watershed_labels.height(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto v = watershed_labels[i];
    out[i] = v >= kFirstParticleLabel ? v - 1 : 0;
  }
  return out;
}

LabelMatrix segment_image(const GrayImage& filtered, const SegParams& p) {
  const PreparedRelief prepared = prepare_relief(filtered, p);
  return particle_labels(watershed(prepared.relief, prepared.markers));
}

}  // namespace ballast
