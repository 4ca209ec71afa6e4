#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ballast/pipeline.hpp"

namespace ballast::service {

// ---- stage dependency graph ------------------------------------------------

enum class StageId { Gray, Tone, Filtered, OpenedClosed, Markers, Gradient, Relief, Labels, Analysis, Render };

std::string_view to_string(StageId id);

struct StageNode {
  StageId id;
  bool per_layer;               // one instance per layer vs. one for the image
  std::vector<StageId> inputs;  // per-layer -> per-layer edges stay within the layer
};

/// The graph for a given mode, in topological order. Labels are per layer in
/// averaged mode and a single stitched instance otherwise.
const std::vector<StageNode>& stage_graph(Mode mode);

/// A concrete stage: the node plus a layer for per-layer nodes.
struct StageInstance {
  StageId id;
  std::optional<Layer> layer;

  /// "filtered:bottom", "analysis", ...
  std::string name() const;
  friend auto operator<=>(const StageInstance&, const StageInstance&) = default;
};

/// Cache key of every stage instance under `cfg`: a digest of the stage's own
/// parameters and the keys of its inputs.
std::map<StageInstance, std::string> stage_keys(const PipelineConfig& cfg);

/// Stage instances whose key differs between the two configurations, in
/// topological order.
std::vector<StageInstance> invalidated_stages(const PipelineConfig& before, const PipelineConfig& after);

// ---- sessions ----------------------------------------------------------------

/// Carries an HTTP status and a JSON body; thrown by every service call.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, nlohmann::json body)
      : std::runtime_error(body.dump()), status_(status), body_(std::move(body)) {}
  int status() const noexcept { return status_; }
  const nlohmann::json& body() const noexcept { return body_; }

 private:
  int status_;
  nlohmann::json body_;
};

struct ServiceOptions {
  std::size_t max_upload_bytes = 50u * 1024u * 1024u;
  std::chrono::seconds session_ttl{1800};
  std::optional<std::filesystem::path> session_dir;  // spill uploads here for recovery
};

struct SessionInfo {
  std::string id;
  int width = 0;
  int height = 0;
};

/// Stage names accepted by stage_png.
inline constexpr std::array<std::string_view, 8> kViewableStages{
    "gray", "tone", "filtered", "opened_closed", "markers", "gradient", "labels", "overlay"};

class TuningService {
 public:
  explicit TuningService(ServiceOptions options = {});
  ~TuningService();
  TuningService(const TuningService&) = delete;
  TuningService& operator=(const TuningService&) = delete;

  /// 413 over the size limit, 415 for unknown content, 422 for a corrupt image.
  SessionInfo create_session(std::span<const std::uint8_t> upload);

  /// {id, width, height, config, params_digest, cached_stages}
  nlohmann::json describe(const std::string& id);

  /// Merges a partial config; returns {"invalidated": [stage names]}. 422 with
  /// the field path on invalid input; the session is left untouched then.
  nlohmann::json update_params(const std::string& id, const nlohmann::json& patch);

  /// PNG of an intermediate stage. 400 for an unknown stage or layer, 409 with
  /// {error, layer, message} when an upstream stage fails.
  std::vector<std::uint8_t> stage_png(const std::string& id, std::string_view stage, std::optional<Layer> layer);

  /// Report JSON text, byte-identical to the CLI's <stem>.report.json.
  std::string result_json(const std::string& id);

  void delete_session(const std::string& id);

  /// Drops sessions idle for longer than the TTL; returns how many.
  std::size_t expire_idle(std::chrono::steady_clock::time_point now = std::chrono::steady_clock::now());

  std::size_t session_count();

  /// Number of stage computations performed so far (cache misses), for tests.
  std::uint64_t computations() const noexcept;

  struct Session;

 private:
  std::shared_ptr<Session> find(const std::string& id);
  std::shared_ptr<Session> add_session(std::string id, std::vector<std::uint8_t> bytes);

  ServiceOptions options_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<std::uint64_t> computations_{0};
};

}  // namespace ballast::service
