#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "ballast/pipeline.hpp"

namespace ballast {

nlohmann::json config_to_json(const PipelineConfig& cfg);

/// Overlays the fields present in `patch` onto `base` and validates the
/// result. "layers" may be an array of three (possibly partial) layer
/// objects or an object keyed by "top" / "middle" / "bottom". Unknown fields
/// and type errors throw ConfigError with the JSON path.
PipelineConfig apply_config_patch(const PipelineConfig& base, const nlohmann::json& patch);

/// apply_config_patch(default_config(), j)
PipelineConfig config_from_json(const nlohmann::json& j);

PipelineConfig load_config(const std::filesystem::path& path);

/// Stable fingerprint of a configuration (hash of its canonical JSON).
std::string config_digest(const PipelineConfig& cfg);

nlohmann::json segment_to_json(const SegmentRecord& rec);

/// Full report, including per-segment records with their color index and
/// the configuration that produced it.
nlohmann::json report_to_json(const DegradationReport& report, const PipelineConfig& cfg);

/// report_to_json rendered as the on-disk / over-the-wire document (2-space
/// indent, trailing newline). The CLI and the service both emit exactly this.
std::string report_document(const DegradationReport& report, const PipelineConfig& cfg);

nlohmann::json color_key_to_json(const ColorKey& key);
ColorKey color_key_from_json(const nlohmann::json& j);
ColorKey load_color_key(const std::filesystem::path& path);

}  // namespace ballast
