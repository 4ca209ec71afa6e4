#include <cmath>
#include <string>

#include "ballast/pipeline.hpp"

namespace ballast {

PipelineConfig default_config() {
  PipelineConfig cfg;
  for (auto& layer : cfg.layers) {
    layer.bilateral = {6.0, 8.0};
    layer.seg.strel_radius = 14;
  }
  cfg.layer(Layer::Bottom).bilateral = {8.0, 10.0};
  cfg.calibration.convex_threshold = 0.73;
  cfg.calibration.small_threshold = 0.11;
  cfg.calibration.large_threshold = 7.069;
  cfg.mode = Mode::Stitched;
  return cfg;
}

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate(const PipelineConfig& cfg) {
  if (cfg.tone) {
    if (!positive(cfg.tone->gamma)) throw ConfigError("tone.gamma", "must be > 0");
    if (!positive(cfg.tone->brightness_gain)) throw ConfigError("tone.brightness_gain", "must be > 0");
  }
  if (cfg.reference_image && cfg.reference_image->empty()) {
    throw ConfigError("reference_image", "must be a non-empty path or null");
  }
  for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
    const auto& layer = cfg.layers[i];
    const std::string prefix = "layers[" + std::to_string(i) + "]";
    if (!positive(layer.bilateral.sigma_s)) throw ConfigError(prefix + ".bilateral.sigma_s", "must be > 0");
    if (!positive(layer.bilateral.sigma_r)) throw ConfigError(prefix + ".bilateral.sigma_r", "must be > 0");
    if (layer.seg.strel_radius < 1) throw ConfigError(prefix + ".seg.strel_radius", "must be >= 1");
    if (layer.seg.min_marker_area < 0) throw ConfigError(prefix + ".seg.min_marker_area", "must be >= 0");
    if (layer.seg.fixed_threshold && !(*layer.seg.fixed_threshold >= 0.0 && *layer.seg.fixed_threshold <= 1.0)) {
      throw ConfigError(prefix + ".seg.fixed_threshold", "must be in [0, 1]");
    }
  }
  const auto& cal = cfg.calibration;
  if (!positive(cal.ball_area_px)) throw ConfigError("calibration.ball_area_px", "must be > 0");
  if (!(cal.convex_threshold > 0.0 && cal.convex_threshold <= 1.0)) {
    throw ConfigError("calibration.convex_threshold", "must be in (0, 1]");
  }
  if (!positive(cal.small_threshold)) throw ConfigError("calibration.small_threshold", "must be > 0");
  if (!(std::isfinite(cal.large_threshold) && cal.large_threshold > cal.small_threshold)) {
    throw ConfigError("calibration.large_threshold", "must be greater than small_threshold");
  }
}

}  // namespace ballast
