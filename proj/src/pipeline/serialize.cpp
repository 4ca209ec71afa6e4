#include "ballast/serialize.hpp"

#include <fstream>

#include "ballast/digest.hpp"

namespace ballast {

using nlohmann::json;

json config_to_json(const PipelineConfig& cfg) {
  json j;
  j["tone"] = cfg.tone ? json{{"gamma", cfg.tone->gamma}, {"brightness_gain", cfg.tone->brightness_gain}}
                       : json(nullptr);
  j["reference_image"] = cfg.reference_image ? json(*cfg.reference_image) : json(nullptr);
  json layers = json::array();
  for (const auto& layer : cfg.layers) {
    layers.push_back({
        {"bilateral", {{"sigma_s", layer.bilateral.sigma_s}, {"sigma_r", layer.bilateral.sigma_r}}},
        {"seg",
         {{"strel_radius", layer.seg.strel_radius},
          {"min_marker_area", layer.seg.min_marker_area},
          {"fixed_threshold", layer.seg.fixed_threshold ? json(*layer.seg.fixed_threshold) : json(nullptr)}}},
    });
  }
  j["layers"] = std::move(layers);
  j["calibration"] = {
      {"ball_area_px", cfg.calibration.ball_area_px},
      {"convex_threshold", cfg.calibration.convex_threshold},
      {"small_threshold", cfg.calibration.small_threshold},
      {"large_threshold", cfg.calibration.large_threshold},
  };
  j["mode"] = std::string(to_string(cfg.mode));
  return j;
}

namespace {

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

// Calls `fn(key, value, path)` for every member, rejecting keys not in `allowed`.
template <typename Fn>
void for_members(const json& j, const std::string& path, std::initializer_list<const char*> allowed, Fn fn) {
  require_object(j, path);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    const std::string child = path.empty() ? key : path + "." + key;
    if (!known) throw ConfigError(child, "unknown field");
    fn(key, value, child);
  }
}

void patch_layer(LayerParams& layer, const json& j, const std::string& path) {
  if (j.is_null()) return;
  for_members(j, path, {"bilateral", "seg"}, [&](const std::string& key, const json& v, const std::string& p) {
    if (key == "bilateral") {
      for_members(v, p, {"sigma_s", "sigma_r"}, [&](const std::string& k, const json& x, const std::string& q) {
        (k == "sigma_s" ? layer.bilateral.sigma_s : layer.bilateral.sigma_r) = get_number(x, q);
      });
    } else {
      for_members(v, p, {"strel_radius", "min_marker_area", "fixed_threshold"},
                  [&](const std::string& k, const json& x, const std::string& q) {
                    if (k == "strel_radius") {
                      layer.seg.strel_radius = get_int(x, q);
                    } else if (k == "min_marker_area") {
                      layer.seg.min_marker_area = get_int(x, q);
                    } else {
                      layer.seg.fixed_threshold =
                          x.is_null() ? std::nullopt : std::optional<double>(get_number(x, q));
                    }
                  });
    }
  });
}

}  // namespace

PipelineConfig apply_config_patch(const PipelineConfig& base, const json& patch) {
  PipelineConfig cfg = base;
  for_members(patch, "", {"tone", "reference_image", "layers", "calibration", "mode"},
              [&](const std::string& key, const json& v, const std::string& path) {
                if (key == "tone") {
                  if (v.is_null()) {
                    cfg.tone.reset();
                    return;
                  }
                  ToneParams tone = cfg.tone.value_or(ToneParams{});
                  for_members(v, path, {"gamma", "brightness_gain"},
                              [&](const std::string& k, const json& x, const std::string& q) {
                                (k == "gamma" ? tone.gamma : tone.brightness_gain) = get_number(x, q);
                              });
                  cfg.tone = tone;
                } else if (key == "reference_image") {
                  if (v.is_null()) {
                    cfg.reference_image.reset();
                  } else if (v.is_string()) {
                    cfg.reference_image = v.get<std::string>();
                  } else {
                    throw ConfigError(path, "expected a string or null");
                  }
                } else if (key == "layers") {
                  if (v.is_array()) {
                    if (v.size() != 3) throw ConfigError(path, "expected exactly 3 layers");
                    for (std::size_t i = 0; i < 3; ++i) {
                      patch_layer(cfg.layers[i], v[i], path + "[" + std::to_string(i) + "]");
                    }
                  } else if (v.is_object()) {
                    for (const auto& [name, layer_patch] : v.items()) {
                      const auto layer = layer_from_string(name);
                      if (!layer) throw ConfigError(path + "." + name, "unknown layer");
                      const auto i = static_cast<std::size_t>(*layer);
                      patch_layer(cfg.layers[i], layer_patch, path + "[" + std::to_string(i) + "]");
                    }
                  } else {
                    throw ConfigError(path, "expected an array or object");
                  }
                } else if (key == "calibration") {
                  for_members(v, path, {"ball_area_px", "convex_threshold", "small_threshold", "large_threshold"},
                              [&](const std::string& k, const json& x, const std::string& q) {
                                const double value = get_number(x, q);
                                auto& cal = cfg.calibration;
                                if (k == "ball_area_px") cal.ball_area_px = value;
                                if (k == "convex_threshold") cal.convex_threshold = value;
                                if (k == "small_threshold") cal.small_threshold = value;
                                if (k == "large_threshold") cal.large_threshold = value;
                              });
                } else {
                  const auto mode = v.is_string() ? mode_from_string(v.get<std::string>()) : std::nullopt;
                  if (!mode) throw ConfigError(path, "expected \"stitched\" or \"averaged\"");
                  cfg.mode = *mode;
                }
              });
  validate(cfg);
  return cfg;
}

PipelineConfig config_from_json(const json& j) { return apply_config_patch(default_config(), j); }

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string() + ": cannot open config");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

std::string config_digest(const PipelineConfig& cfg) { return short_digest(config_to_json(cfg).dump()); }

json segment_to_json(const SegmentRecord& rec) {
  return {
      {"label", rec.label},
      {"area_px", rec.area_px},
      {"hull_area_px", rec.hull_area_px},
      {"convexity", rec.convexity},
      {"r", rec.r},
      {"category", std::string(to_string(rec.category))},
      {"color_index", color_index(rec.category, rec.r)},
  };
}

json report_to_json(const DegradationReport& report, const PipelineConfig& cfg) {
  const auto t = report.category_tally();
  json counts;
  json areas;
  for (auto c : {Category::ConvexFail, Category::Small, Category::Typical, Category::Large}) {
    counts[std::string(to_string(c))] = t.count(c);
    areas[std::string(to_string(c))] = t.area(c);
  }
  json segments = json::array();
  for (const auto& s : report.segments) segments.push_back(segment_to_json(s));

  json j = {
      {"mode", std::string(to_string(report.mode))},
      {"width", report.width},
      {"height", report.height},
      {"image_area_px", report.image_area_px},
      {"typical_area_px", report.typical_area_px},
      {"unlabeled_px", report.unlabeled_px},
      {"pds_percent", report.pds_percent},
      {"final_pds", report.final_pds},
      {"params_digest", report.params_digest},
      {"category_counts", counts},
      {"category_areas", areas},
      {"segments", segments},
      {"config", config_to_json(cfg)},
  };
  if (report.per_layer_pds) {
    j["per_layer_pds"] = *report.per_layer_pds;
  }
  return j;
}

std::string report_document(const DegradationReport& report, const PipelineConfig& cfg) {
  return report_to_json(report, cfg).dump(2) + "\n";
}

namespace {

json rgb_to_json(const Rgb& c) { return json::array({c.r, c.g, c.b}); }

Rgb rgb_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(path, "expected [r, g, b]");
  Rgb c{get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]"), get_number(j[2], path + "[2]")};
  for (double v : {c.r, c.g, c.b}) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(path, "channel values must be in [0, 1]");
  }
  return c;
}

}  // namespace

json color_key_to_json(const ColorKey& key) {
  json entries = json::array();
  for (const auto& c : key.entries) entries.push_back(rgb_to_json(c));
  return {{"entries", entries}, {"ridge", rgb_to_json(key.ridge)}, {"degraded_zone", rgb_to_json(key.degraded_zone)}};
}

ColorKey color_key_from_json(const json& j) {
  require_object(j, "<root>");
  ColorKey key = default_color_key();
  if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].size() != kColorKeySize) {
    throw ConfigError("entries", "expected an array of 64 [r, g, b] triples");
  }
  for (std::size_t i = 0; i < key.entries.size(); ++i) {
    key.entries[i] = rgb_from_json(j["entries"][i], "entries[" + std::to_string(i) + "]");
  }
  if (j.contains("ridge")) key.ridge = rgb_from_json(j["ridge"], "ridge");
  if (j.contains("degraded_zone")) key.degraded_zone = rgb_from_json(j["degraded_zone"], "degraded_zone");
  return key;
}

ColorKey load_color_key(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string() + ": cannot open color key");
  try {
    return color_key_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace ballast
