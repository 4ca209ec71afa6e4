#pragma once

#include <array>
#include <optional>
#include <string>

#include "ballast/analysis.hpp"
#include "ballast/colorcode.hpp"
#include "ballast/image.hpp"
#include "ballast/layers.hpp"
#include "ballast/preprocess.hpp"
#include "ballast/segmentation.hpp"

namespace ballast {

struct LayerParams {
  BilateralParams bilateral;
  SegParams seg;

  friend bool operator==(const LayerParams&, const LayerParams&) = default;
};

struct PipelineConfig {
  std::optional<ToneParams> tone;
  std::optional<std::string> reference_image;  // histogram-matching target
  std::array<LayerParams, 3> layers;           // top, middle, bottom
  CalibrationConfig calibration;
  Mode mode = Mode::Stitched;

  const LayerParams& layer(Layer l) const { return layers[static_cast<std::size_t>(l)]; }
  LayerParams& layer(Layer l) { return layers[static_cast<std::size_t>(l)]; }

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Top/middle: sigma_s 6, sigma_r 8. Bottom: sigma_s 8, sigma_r 10. Strel 14
/// on every layer, convex threshold 0.73, size thresholds 0.11 / 7.069,
/// stitched mode, no tone adjustment.
PipelineConfig default_config();

/// Throws ConfigError naming the first invalid field.
void validate(const PipelineConfig& cfg);

// Individual stages, shared by the batch pipeline and the tuning service so
// both produce identical bytes.

GrayImage stage_gray(const RgbImage& img);

/// Optional tone curve, then optional histogram matching against `reference`.
GrayImage stage_tone(const GrayImage& gray, const PipelineConfig& cfg, const GrayImage* reference);

/// Loads cfg.reference_image as grayscale, if configured.
std::optional<GrayImage> load_reference(const PipelineConfig& cfg);

GrayImage stage_filtered(const GrayImage& layer_gray, const LayerParams& p);

/// Marker preparation for one layer; errors carry the layer.
PreparedRelief stage_relief(const GrayImage& filtered, const LayerParams& p, Layer layer);

/// Algorithm-3 labels: per-layer reliefs and markers stitched, one watershed
/// over the whole image. Markers adjacent across a seam merge into one seed.
LabelMatrix stitched_labels(const std::array<const PreparedRelief*, 3>& layers);

/// Particle labels of one layer segmented on its own.
LabelMatrix layer_labels(const PreparedRelief& layer);

struct PipelineResult {
  DegradationReport report;
  RgbImage overlay;
  LabelMatrix labels;
};

/// Measurement, classification, PDS and rendering for stitched-mode labels.
PipelineResult finish_stitched(LabelMatrix labels, const PipelineConfig& cfg, const ColorKey& key);

/// Same for averaged mode: each layer's labels are measured on their own
/// band, per-layer PDS averaged. Labels are renumbered to be unique.
PipelineResult finish_averaged(const std::array<LabelMatrix, 3>& layers, const PipelineConfig& cfg,
                               const ColorKey& key);

PipelineResult process_stitched(const RgbImage& img, const PipelineConfig& cfg,
                                const ColorKey& key = default_color_key());
PipelineResult process_averaged(const RgbImage& img, const PipelineConfig& cfg,
                                const ColorKey& key = default_color_key());

/// Dispatches on cfg.mode.
PipelineResult process(const RgbImage& img, const PipelineConfig& cfg, const ColorKey& key = default_color_key());

}  // namespace ballast
