#include "ballast/service.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

#include <fmt/format.h>

#include "ballast/digest.hpp"
#include "ballast/imageio.hpp"
#include "ballast/log.hpp"
#include "ballast/serialize.hpp"

namespace ballast::service {

using nlohmann::json;

std::string_view to_string(StageId id) {
  switch (id) {
    case StageId::Gray: return "gray";
    case StageId::Tone: return "tone";
    case StageId::Filtered: return "filtered";
    case StageId::OpenedClosed: return "opened_closed";
    case StageId::Markers: return "markers";
    case StageId::Gradient: return "gradient";
    case StageId::Relief: return "relief";
    case StageId::Labels: return "labels";
    case StageId::Analysis: return "analysis";
    case StageId::Render: return "render";
  }
  return "?";
}

namespace {

std::vector<StageNode> make_graph(bool labels_per_layer) {
  using S = StageId;
  return {
      {S::Gray, false, {}},
      {S::Tone, false, {S::Gray}},
      {S::Filtered, true, {S::Tone}},
      {S::OpenedClosed, true, {S::Filtered}},
      {S::Markers, true, {S::OpenedClosed}},
      {S::Gradient, true, {S::Filtered}},
      {S::Relief, true, {S::Gradient, S::Markers}},
      {S::Labels, labels_per_layer, {S::Relief}},
      {S::Analysis, false, {S::Labels}},
      {S::Render, false, {S::Analysis}},
  };
}

constexpr std::array<Layer, 3> kLayers{Layer::Top, Layer::Middle, Layer::Bottom};

const StageNode& node_of(Mode mode, StageId id) {
  for (const auto& n : stage_graph(mode)) {
    if (n.id == id) return n;
  }
  throw std::logic_error("stage missing from graph");
}

std::vector<StageInstance> instances_in_order(Mode mode) {
  std::vector<StageInstance> out;
  for (const auto& n : stage_graph(mode)) {
    if (n.per_layer) {
      for (Layer l : kLayers) out.push_back({n.id, l});
    } else {
      out.push_back({n.id, std::nullopt});
    }
  }
  return out;
}

// The slice of the configuration a stage reads directly.
json own_params(StageId id, std::optional<Layer> layer, const json& c) {
  const auto layer_json = [&]() -> const json& { return c["layers"][static_cast<std::size_t>(*layer)]; };
  switch (id) {
    case StageId::Tone: return {c["tone"], c["reference_image"]};
    case StageId::Filtered: return layer_json()["bilateral"];
    case StageId::OpenedClosed: return layer_json()["seg"]["strel_radius"];
    case StageId::Markers: return layer_json()["seg"];
    case StageId::Labels: return c["mode"];
    case StageId::Analysis: return c["calibration"];
    default: return nullptr;
  }
}

}  // namespace

const std::vector<StageNode>& stage_graph(Mode mode) {
  static const std::vector<StageNode> stitched = make_graph(false);
  static const std::vector<StageNode> averaged = make_graph(true);
  return mode == Mode::Stitched ? stitched : averaged;
}

std::string StageInstance::name() const {
  std::string out(to_string(id));
  if (layer) out += ":" + std::string(ballast::to_string(*layer));
  return out;
}

std::map<StageInstance, std::string> stage_keys(const PipelineConfig& cfg) {
  const json c = config_to_json(cfg);
  std::map<StageInstance, std::string> keys;
  for (const auto& inst : instances_in_order(cfg.mode)) {
    const auto& node = node_of(cfg.mode, inst.id);
    json inputs = json::array();
    for (StageId in : node.inputs) {
      if (!node_of(cfg.mode, in).per_layer) {
        inputs.push_back(keys.at({in, std::nullopt}));
      } else if (inst.layer) {
        inputs.push_back(keys.at({in, inst.layer}));
      } else {
        for (Layer l : kLayers) inputs.push_back(keys.at({in, l}));
      }
    }
    const json material = {inst.name(), own_params(inst.id, inst.layer, c), inputs};
    keys.emplace(inst, short_digest(material.dump()));
  }
  return keys;
}

std::vector<StageInstance> invalidated_stages(const PipelineConfig& before, const PipelineConfig& after) {
  const auto old_keys = stage_keys(before);
  const auto new_keys = stage_keys(after);
  std::vector<StageInstance> out;
  for (const auto& inst : instances_in_order(after.mode)) {
    const auto it = old_keys.find(inst);
    if (it == old_keys.end() || it->second != new_keys.at(inst)) out.push_back(inst);
  }
  return out;
}

// ---- sessions ----------------------------------------------------------------

struct TuningService::Session {
  std::string id;
  RgbImage source;
  std::optional<std::filesystem::path> spill;
  std::mutex mutex;  // serializes everything below
  PipelineConfig config = default_config();
  std::chrono::steady_clock::time_point last_access = std::chrono::steady_clock::now();
  std::map<std::string, std::shared_ptr<const void>> cache;
};

namespace {

json error_body(const Error& e) {
  json body = {{"error", std::string(to_string(e.code()))}, {"message", e.detail()}};
  body["layer"] = e.layer() ? json(std::string(to_string(*e.layer()))) : json(nullptr);
  return body;
}

// Lazily evaluates stage instances of one session, memoized by stage key.
// The caller holds the session mutex.
class Evaluator {
 public:
  Evaluator(TuningService::Session& s, std::atomic<std::uint64_t>& counter)
      : s_(s), counter_(counter), keys_(stage_keys(s.config)) {}

  std::shared_ptr<const GrayImage> gray() {
    return memo<GrayImage>({StageId::Gray, std::nullopt}, [&] { return stage_gray(s_.source); });
  }

  std::shared_ptr<const GrayImage> tone() {
    return memo<GrayImage>({StageId::Tone, std::nullopt}, [&] {
      const auto reference = load_reference(s_.config);
      return stage_tone(*gray(), s_.config, reference ? &*reference : nullptr);
    });
  }

  std::shared_ptr<const GrayImage> filtered(Layer l) {
    return memo<GrayImage>({StageId::Filtered, l}, [&] {
      const auto t = tone();
      const auto band = layer_bands(t->height())[static_cast<std::size_t>(l)];
      return stage_filtered(crop_rows(*t, band), s_.config.layer(l));
    });
  }

  std::shared_ptr<const GrayImage> opened_closed(Layer l) {
    return memo<GrayImage>({StageId::OpenedClosed, l}, [&] {
      return open_close(*filtered(l), DiskStrel(s_.config.layer(l).seg.strel_radius));
    });
  }

  std::shared_ptr<const MarkerSet> markers(Layer l) {
    return memo<MarkerSet>({StageId::Markers, l}, [&] {
      const auto oc = opened_closed(l);
      try {
        return make_markers(*oc, s_.config.layer(l).seg);
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw e.with_layer(l);
      }
    });
  }

  std::shared_ptr<const GrayImage> gradient(Layer l) {
    return memo<GrayImage>({StageId::Gradient, l}, [&] { return gradient_magnitude(*filtered(l)); });
  }

  std::shared_ptr<const PreparedRelief> relief(Layer l) {
    return memo<PreparedRelief>({StageId::Relief, l}, [&] {
      PreparedRelief out;
      out.opened_closed = *opened_closed(l);
      out.markers = *markers(l);
      out.gradient = *gradient(l);
      out.relief = impose_minima(out.gradient, marker_union(out.markers));
      return out;
    });
  }

  std::shared_ptr<const LabelMatrix> stitched() {
    return memo<LabelMatrix>({StageId::Labels, std::nullopt}, [&] {
      const auto a = relief(Layer::Top);
      const auto b = relief(Layer::Middle);
      const auto c = relief(Layer::Bottom);
      return stitched_labels({a.get(), b.get(), c.get()});
    });
  }

  std::shared_ptr<const LabelMatrix> layer(Layer l) {
    return memo<LabelMatrix>({StageId::Labels, l}, [&] { return layer_labels(*relief(l)); });
  }

  std::shared_ptr<const PipelineResult> analysis() {
    return memo<PipelineResult>({StageId::Analysis, std::nullopt}, [&] {
      const auto key = default_color_key();
      if (s_.config.mode == Mode::Stitched) return finish_stitched(*stitched(), s_.config, key);
      return finish_averaged({*layer(Layer::Top), *layer(Layer::Middle), *layer(Layer::Bottom)}, s_.config, key);
    });
  }

  std::shared_ptr<const std::vector<std::uint8_t>> render() {
    return memo<std::vector<std::uint8_t>>({StageId::Render, std::nullopt},
                                           [&] { return encode_png(analysis()->overlay); });
  }

 private:
  template <typename T, typename Fn>
  std::shared_ptr<const T> memo(const StageInstance& inst, Fn&& compute) {
    const std::string& key = keys_.at(inst);
    if (const auto it = s_.cache.find(key); it != s_.cache.end()) {
      return std::static_pointer_cast<const T>(it->second);
    }
    spdlog::debug("session {}: computing {}", s_.id, inst.name());
    auto value = std::make_shared<const T>(compute());
    ++counter_;
    s_.cache.emplace(key, value);
    return value;
  }

  TuningService::Session& s_;
  std::atomic<std::uint64_t>& counter_;
  std::map<StageInstance, std::string> keys_;
};

std::string random_id() {
  std::random_device rd;
  std::string id;
  for (int i = 0; i < 4; ++i) id += fmt::format("{:08x}", rd());
  return id;
}

template <typename T>
Image<T> stitched_or_layer(std::optional<Layer> layer, auto&& get) {
  if (layer) return *get(*layer);
  // Separate statements: a failure must be reported for the topmost layer.
  const auto top = get(Layer::Top);
  const auto middle = get(Layer::Middle);
  const auto bottom = get(Layer::Bottom);
  return stitch_rows(*top, *middle, *bottom);
}

template <typename T>
Image<T> maybe_crop(const Image<T>& img, std::optional<Layer> layer) {
  if (!layer) return img;
  return crop_rows(img, layer_bands(img.height())[static_cast<std::size_t>(*layer)]);
}

}  // namespace

TuningService::TuningService(ServiceOptions options) : options_(std::move(options)) {
  if (!options_.session_dir) return;
  std::filesystem::create_directories(*options_.session_dir);
  for (const auto& entry : std::filesystem::directory_iterator(*options_.session_dir)) {
    if (entry.path().extension() != ".upload") continue;
    try {
      add_session(entry.path().stem().string(), read_file(entry.path()));
      spdlog::info("recovered session {}", entry.path().stem().string());
    } catch (const std::exception& e) {
      spdlog::warn("skipping {}: {}", entry.path().string(), e.what());
    }
  }
}

TuningService::~TuningService() = default;

std::shared_ptr<TuningService::Session> TuningService::add_session(std::string id, std::vector<std::uint8_t> bytes) {
  auto session = std::make_shared<Session>();
  session->id = id;
  session->source = decode_image(bytes, "upload");
  if (session->source.height() < 3) throw Error(ErrorCode::ImageTooSmall, "image needs at least 3 rows");
  if (options_.session_dir) {
    session->spill = *options_.session_dir / (id + ".upload");
    if (!std::filesystem::exists(*session->spill)) write_file(*session->spill, bytes);
  }
  std::lock_guard lock(mutex_);
  sessions_[id] = session;
  return session;
}

SessionInfo TuningService::create_session(std::span<const std::uint8_t> upload) {
  expire_idle();
  if (upload.size() > options_.max_upload_bytes) {
    throw ServiceError(413, {{"error", "PayloadTooLarge"},
                             {"message", fmt::format("upload exceeds {} bytes", options_.max_upload_bytes)}});
  }
  if (detect_format(upload) == ImageFormat::Unknown) {
    throw ServiceError(415, {{"error", "UnsupportedFormat"}, {"message", "expected a PNG or JPEG image"}});
  }
  try {
    const auto session = add_session(random_id(), {upload.begin(), upload.end()});
    return {session->id, session->source.width(), session->source.height()};
  } catch (const Error& e) {
    throw ServiceError(422, error_body(e));
  }
}

std::shared_ptr<TuningService::Session> TuningService::find(const std::string& id) {
  expire_idle();
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw ServiceError(404, {{"error", "NotFound"}, {"message", "no session " + id}});
  }
  it->second->last_access = std::chrono::steady_clock::now();
  return it->second;
}

json TuningService::describe(const std::string& id) {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  json cached = json::array();
  for (const auto& [inst, key] : stage_keys(s->config)) {
    if (s->cache.count(key)) cached.push_back(inst.name());
  }
  return {
      {"id", s->id},
      {"width", s->source.width()},
      {"height", s->source.height()},
      {"config", config_to_json(s->config)},
      {"params_digest", config_digest(s->config)},
      {"cached_stages", cached},
  };
}

json TuningService::update_params(const std::string& id, const json& patch) {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  PipelineConfig next;
  try {
    next = apply_config_patch(s->config, patch);
  } catch (const ConfigError& e) {
    throw ServiceError(422, {{"error", "InvalidParameter"}, {"field", e.field()}, {"message", e.reason()}});
  }
  json names = json::array();
  for (const auto& inst : invalidated_stages(s->config, next)) names.push_back(inst.name());
  s->config = next;

  std::set<std::string> live;
  for (const auto& [inst, key] : stage_keys(s->config)) live.insert(key);
  std::erase_if(s->cache, [&](const auto& entry) { return !live.count(entry.first); });
  return {{"invalidated", names}};
}

std::vector<std::uint8_t> TuningService::stage_png(const std::string& id, std::string_view stage,
                                                   std::optional<Layer> layer) {
  if (std::find(kViewableStages.begin(), kViewableStages.end(), stage) == kViewableStages.end()) {
    throw ServiceError(400, {{"error", "UnknownStage"}, {"message", "unknown stage " + std::string(stage)}});
  }
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  Evaluator ev(*s, computations_);
  try {
    if (stage == "gray") return encode_png(maybe_crop(*ev.gray(), layer));
    if (stage == "tone") return encode_png(maybe_crop(*ev.tone(), layer));
    if (stage == "filtered") {
      return encode_png(stitched_or_layer<double>(layer, [&](Layer l) { return ev.filtered(l); }));
    }
    if (stage == "opened_closed") {
      return encode_png(stitched_or_layer<double>(layer, [&](Layer l) { return ev.opened_closed(l); }));
    }
    if (stage == "gradient") {
      return encode_png(stitched_or_layer<double>(layer, [&](Layer l) { return ev.gradient(l); }));
    }
    if (stage == "markers") {
      return encode_png(stitched_or_layer<std::uint8_t>(layer, [&](Layer l) {
        return std::make_shared<const BinaryMask>(marker_union(*ev.markers(l)));
      }));
    }
    if (stage == "labels") return encode_png(maybe_crop(ev.analysis()->overlay, layer));
    if (layer) return encode_png(maybe_crop(ev.analysis()->overlay, layer));
    return *ev.render();
  } catch (const Error& e) {
    throw ServiceError(409, error_body(e));
  }
}

std::string TuningService::result_json(const std::string& id) {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  Evaluator ev(*s, computations_);
  try {
    return report_document(ev.analysis()->report, s->config);
  } catch (const Error& e) {
    throw ServiceError(409, error_body(e));
  }
}

void TuningService::delete_session(const std::string& id) {
  const auto s = find(id);
  std::lock_guard lock(mutex_);
  sessions_.erase(id);
  if (s->spill) {
    std::error_code ec;
    std::filesystem::remove(*s->spill, ec);
  }
}

std::size_t TuningService::expire_idle(std::chrono::steady_clock::time_point now) {
  std::lock_guard lock(mutex_);
  return std::erase_if(sessions_, [&](const auto& entry) {
    const auto& s = entry.second;
    if (now - s->last_access <= options_.session_ttl) return false;
    spdlog::info("session {} expired", s->id);
    if (s->spill) {
      std::error_code ec;
      std::filesystem::remove(*s->spill, ec);
    }
    return true;
  });
}

std::size_t TuningService::session_count() {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::uint64_t TuningService::computations() const noexcept { return computations_.load(); }

}  // namespace ballast::service
