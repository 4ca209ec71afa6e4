#include <numeric>

#include "ballast/imageio.hpp"
#include "ballast/log.hpp"
#include "ballast/pipeline.hpp"
#include "ballast/serialize.hpp"

namespace ballast {

GrayImage stage_gray(const RgbImage& img) { return to_grayscale(img); }

std::optional<GrayImage> load_reference(const PipelineConfig& cfg) {
  if (!cfg.reference_image) return std::nullopt;
  return to_grayscale(load_image(*cfg.reference_image));
}

GrayImage stage_tone(const GrayImage& gray, const PipelineConfig& cfg, const GrayImage* reference) {
  GrayImage out = cfg.tone ? adjust_tone(gray, *cfg.tone) : gray;
  if (reference != nullptr) {
    out = histogram_match(out, *reference);
  }
  return out;
}

GrayImage stage_filtered(const GrayImage& layer_gray, const LayerParams& p) {
  return bilateral_filter(layer_gray, p.bilateral);
}

PreparedRelief stage_relief(const GrayImage& filtered, const LayerParams& p, Layer layer) {
  try {
    return prepare_relief(filtered, p.seg);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw e.with_layer(layer);
  }
}

LabelMatrix stitched_labels(const std::array<const PreparedRelief*, 3>& layers) {
  const auto& [top, mid, bot] = layers;
  const GrayImage relief = stitch_rows(top->relief, mid->relief, bot->relief);
  MarkerSet markers{
      stitch_rows(top->markers.foreground, mid->markers.foreground, bot->markers.foreground),
      stitch_rows(top->markers.background, mid->markers.background, bot->markers.background),
  };
  // Foreground seeds are labelled as 8-connected components of the stitched
  // mask, so blobs touching across a seam become a single seed.
  return particle_labels(watershed(relief, markers));
}

LabelMatrix layer_labels(const PreparedRelief& layer) {
  return particle_labels(watershed(layer.relief, layer.markers));
}

namespace {

std::int64_t labelled_area(std::span<const SegmentRecord> records) {
  std::int64_t sum = 0;
  for (const auto& r : records) sum += r.area_px;
  return sum;
}

}  // namespace

PipelineResult finish_stitched(LabelMatrix labels, const PipelineConfig& cfg, const ColorKey& key) {
  PipelineResult out;
  auto& report = out.report;
  report.mode = Mode::Stitched;
  report.width = labels.width();
  report.height = labels.height();
  report.image_area_px = static_cast<std::int64_t>(labels.size());
  report.segments = measure_segments(labels, cfg.calibration);
  report.typical_area_px = report.category_tally().area(Category::Typical);
  report.unlabeled_px = report.image_area_px - labelled_area(report.segments);
  report.pds_percent = compute_pds(report.segments, static_cast<double>(report.image_area_px));
  report.final_pds = report.pds_percent;
  report.params_digest = config_digest(cfg);
  out.overlay = render_labels(labels, report.segments, key);
  out.labels = std::move(labels);
  return out;
}

PipelineResult finish_averaged(const std::array<LabelMatrix, 3>& layers, const PipelineConfig& cfg,
                               const ColorKey& key) {
  PipelineResult out;
  auto& report = out.report;
  report.mode = Mode::Averaged;

  std::array<LabelMatrix, 3> renumbered;
  std::array<double, 3> per_layer{};
  std::int32_t offset = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    auto records = measure_segments(layers[i], cfg.calibration);
    per_layer[i] = compute_pds(records, static_cast<double>(layers[i].size()));

    std::int32_t max_label = 0;
    renumbered[i] = layers[i];
    for (auto& v : renumbered[i].pixels()) {
      if (v != 0) {
        max_label = std::max(max_label, v);
        v += offset;
      }
    }
    for (auto& rec : records) {
      rec.label += offset;
      report.segments.push_back(rec);
    }
    offset += max_label;
  }

  LabelMatrix labels = stitch_rows(renumbered[0], renumbered[1], renumbered[2]);
  report.width = labels.width();
  report.height = labels.height();
  report.image_area_px = static_cast<std::int64_t>(labels.size());
  report.typical_area_px = report.category_tally().area(Category::Typical);
  report.unlabeled_px = report.image_area_px - labelled_area(report.segments);
  report.pds_percent = compute_pds(report.segments, static_cast<double>(report.image_area_px));
  report.per_layer_pds = per_layer;
  report.final_pds = (per_layer[0] + per_layer[1] + per_layer[2]) / 3.0;
  report.params_digest = config_digest(cfg);
  out.overlay = render_labels(labels, report.segments, key);
  out.labels = std::move(labels);
  return out;
}

namespace {

struct PreparedLayers {
  LayerSplit split;
  std::array<PreparedRelief, 3> relief;
};

PreparedLayers prepare_layers(const RgbImage& img, const PipelineConfig& cfg) {
  validate(cfg);
  const auto reference = load_reference(cfg);
  const GrayImage toned = stage_tone(stage_gray(img), cfg, reference ? &*reference : nullptr);
  PreparedLayers out;
  out.split = split_layers(toned);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto layer = static_cast<Layer>(i);
    spdlog::debug("layer {}: filtering and marker preparation", to_string(layer));
    const GrayImage filtered = stage_filtered(out.split.images[i], cfg.layers[i]);
    out.relief[i] = stage_relief(filtered, cfg.layers[i], layer);
  }
  return out;
}

}  // namespace

PipelineResult process_stitched(const RgbImage& img, const PipelineConfig& cfg, const ColorKey& key) {
  const PreparedLayers prepared = prepare_layers(img, cfg);
  LabelMatrix labels = stitched_labels({&prepared.relief[0], &prepared.relief[1], &prepared.relief[2]});
  return finish_stitched(std::move(labels), cfg, key);
}

PipelineResult process_averaged(const RgbImage& img, const PipelineConfig& cfg, const ColorKey& key) {
  const PreparedLayers prepared = prepare_layers(img, cfg);
  std::array<LabelMatrix, 3> labels;
  for (std::size_t i = 0; i < 3; ++i) {
    labels[i] = layer_labels(prepared.relief[i]);
  }
  return finish_averaged(labels, cfg, key);
}

PipelineResult process(const RgbImage& img, const PipelineConfig& cfg, const ColorKey& key) {
  return cfg.mode == Mode::Stitched ? process_stitched(img, cfg, key) : process_averaged(img, cfg, key);
}

}  // namespace ballast
