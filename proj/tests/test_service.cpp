#include <algorithm>
#include <random>
#include <set>
#include <thread>

#include "doctest.h"

#include "ballast/serialize.hpp"
#include "ballast/service.hpp"
#include "scenes.hpp"
#include "tempdir.hpp"

using namespace ballast;
using namespace ballast::service;
using nlohmann::json;

namespace {

std::set<std::string> names(const std::vector<StageInstance>& v) {
  std::set<std::string> out;
  for (const auto& s : v) out.insert(s.name());
  return out;
}

std::set<std::string> names(const json& arr) {
  std::set<std::string> out;
  for (const auto& s : arr) out.insert(s.get<std::string>());
  return out;
}

// Independent dependency walk: a stage is stale when its own parameters
// changed or any input instance is stale.
std::set<std::string> expected_stale(Mode mode, const std::set<std::string>& changed_roots) {
  std::set<std::string> stale;
  for (const auto& node : stage_graph(mode)) {
    std::vector<std::optional<Layer>> layers;
    if (node.per_layer) {
      layers = {Layer::Top, Layer::Middle, Layer::Bottom};
    } else {
      layers = {std::nullopt};
    }
    for (const auto& l : layers) {
      const StageInstance inst{node.id, l};
      bool is_stale = changed_roots.count(inst.name()) > 0;
      for (StageId in : node.inputs) {
        for (const auto& other : stage_graph(mode)) {
          if (other.id != in) continue;
          if (!other.per_layer) {
            is_stale = is_stale || stale.count(StageInstance{in, std::nullopt}.name());
          } else if (l) {
            is_stale = is_stale || stale.count(StageInstance{in, l}.name());
          } else {
            for (Layer x : {Layer::Top, Layer::Middle, Layer::Bottom}) {
              is_stale = is_stale || stale.count(StageInstance{in, x}.name());
            }
          }
        }
      }
      if (is_stale) stale.insert(inst.name());
    }
  }
  return stale;
}

int status_of(auto&& fn) {
  try {
    fn();
  } catch (const ServiceError& e) {
    return e.status();
  }
  return 200;
}

ServiceError error_of(auto&& fn) {
  try {
    fn();
  } catch (const ServiceError& e) {
    return e;
  }
  FAIL("expected a ServiceError");
  return ServiceError(0, nullptr);
}

json light_patch(Mode mode = Mode::Stitched) {
  json layer = {{"bilateral", {{"sigma_s", 2.0}, {"sigma_r", 8.0}}}, {"seg", {{"strel_radius", 6}}}};
  return {{"mode", std::string(to_string(mode))},
          {"layers", json::array({layer, layer, layer})},
          {"calibration", {{"ball_area_px", 1000.0}}}};
}

std::string cold_report(const PipelineConfig& cfg, std::uint32_t seed = 7) {
  const auto img = decode_image(testkit::layered_scene_png(seed));
  return report_document(process(img, cfg).report, cfg);
}

}  // namespace

TEST_CASE("stage graph is topologically ordered and complete") {
  for (Mode mode : {Mode::Stitched, Mode::Averaged}) {
    std::set<StageId> seen;
    for (const auto& node : stage_graph(mode)) {
      for (StageId in : node.inputs) CHECK(seen.count(in) == 1);
      seen.insert(node.id);
    }
    CHECK(seen.size() == 10);
  }
  const auto find_labels = [](Mode m) {
    for (const auto& n : stage_graph(m)) {
      if (n.id == StageId::Labels) return n.per_layer;
    }
    return false;
  };
  CHECK_FALSE(find_labels(Mode::Stitched));
  CHECK(find_labels(Mode::Averaged));
}

TEST_CASE("identical configurations invalidate nothing") {
  const auto cfg = default_config();
  CHECK(invalidated_stages(cfg, cfg).empty());
  CHECK(stage_keys(cfg) == stage_keys(default_config()));
}

TEST_CASE("calibration changes touch analysis and rendering only") {
  for (Mode mode : {Mode::Stitched, Mode::Averaged}) {
    auto before = default_config();
    before.mode = mode;
    auto after = before;
    after.calibration.convex_threshold = 0.6;
    CHECK(names(invalidated_stages(before, after)) == std::set<std::string>{"analysis", "render"});
    after = before;
    after.calibration.ball_area_px = 2000.0;
    CHECK(names(invalidated_stages(before, after)) == std::set<std::string>{"analysis", "render"});
    after = before;
    after.calibration.small_threshold = 0.2;
    CHECK(names(invalidated_stages(before, after)) == std::set<std::string>{"analysis", "render"});
  }
}

TEST_CASE("bottom sigma_s in averaged mode invalidates the bottom chain only") {
  auto before = default_config();
  before.mode = Mode::Averaged;
  auto after = before;
  after.layers[2].bilateral.sigma_s = 4.0;
  const std::set<std::string> expected{"filtered:bottom", "opened_closed:bottom", "markers:bottom",
                                       "gradient:bottom", "relief:bottom",        "labels:bottom",
                                       "analysis",        "render"};
  CHECK(names(invalidated_stages(before, after)) == expected);
  CHECK(expected == expected_stale(Mode::Averaged, {"filtered:bottom"}));
}

TEST_CASE("bottom sigma_s in stitched mode keeps top and middle marker prep") {
  auto before = default_config();
  auto after = before;
  after.layers[2].bilateral.sigma_s = 4.0;
  const auto got = names(invalidated_stages(before, after));
  const std::set<std::string> expected{"filtered:bottom", "opened_closed:bottom", "markers:bottom", "gradient:bottom",
                                       "relief:bottom",   "labels",               "analysis",       "render"};
  CHECK(got == expected);
  for (const char* kept : {"filtered:top", "relief:top", "markers:middle", "relief:middle"}) CHECK(got.count(kept) == 0);
}

TEST_CASE("strel changes start at morphology, tone changes start everywhere") {
  auto before = default_config();
  auto after = before;
  after.layers[0].seg.strel_radius = 10;
  CHECK(names(invalidated_stages(before, after)) ==
        expected_stale(Mode::Stitched, {"opened_closed:top", "markers:top"}));
  CHECK(names(invalidated_stages(before, after)).count("filtered:top") == 0);
  CHECK(names(invalidated_stages(before, after)).count("gradient:top") == 0);

  after = before;
  after.layers[1].seg.min_marker_area = 5;
  CHECK(names(invalidated_stages(before, after)) == expected_stale(Mode::Stitched, {"markers:middle"}));

  after = before;
  after.tone = ToneParams{1.1, 1.0};
  const auto all = names(invalidated_stages(before, after));
  CHECK(all == expected_stale(Mode::Stitched, {"tone"}));
  CHECK(all.count("gray") == 0);
  CHECK(all.size() == 3 * 5 + 4);
}

TEST_CASE("mode switch invalidates labels onwards") {
  auto before = default_config();
  auto after = before;
  after.mode = Mode::Averaged;
  CHECK(names(invalidated_stages(before, after)) ==
        std::set<std::string>{"labels:top", "labels:middle", "labels:bottom", "analysis", "render"});
}

TEST_CASE("randomized invalidation matches an independent dependency walk") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto before = default_config();
    before.mode = rng() % 2 ? Mode::Stitched : Mode::Averaged;
    auto after = before;
    std::set<std::string> roots;
    const int edits = 1 + static_cast<int>(rng() % 3);
    for (int e = 0; e < edits; ++e) {
      const auto li = rng() % 3;
      const std::string lname(to_string(static_cast<Layer>(li)));
      switch (rng() % 5) {
        case 0:
          after.layers[li].bilateral.sigma_s += 1.0;
          roots.insert("filtered:" + lname);
          break;
        case 1:
          after.layers[li].bilateral.sigma_r += 1.0;
          roots.insert("filtered:" + lname);
          break;
        case 2:
          after.layers[li].seg.strel_radius += 1;
          roots.insert("opened_closed:" + lname);
          roots.insert("markers:" + lname);
          break;
        case 3:
          after.layers[li].seg.fixed_threshold = 0.5;
          roots.insert("markers:" + lname);
          break;
        default:
          after.calibration.large_threshold += 0.5;
          roots.insert("analysis");
          break;
      }
    }
    CHECK(names(invalidated_stages(before, after)) == expected_stale(before.mode, roots));
  }
}

TEST_CASE("sessions reject bad uploads") {
  TuningService svc(ServiceOptions{.max_upload_bytes = 1024});
  std::vector<std::uint8_t> big(2048, 0x89);
  CHECK(status_of([&] { svc.create_session(big); }) == 413);
  const std::string text = "hello, not an image";
  CHECK(status_of([&] { svc.create_session({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()}); }) ==
        415);
  std::vector<std::uint8_t> truncated = encode_png(testkit::render_disks_rgb(16, 16, {{8, 8, 4}}));
  truncated.resize(40);
  CHECK(status_of([&] { svc.create_session(truncated); }) == 422);
  CHECK(svc.session_count() == 0);
}

TEST_CASE("unknown sessions and stages") {
  TuningService svc;
  CHECK(status_of([&] { svc.describe("nope"); }) == 404);
  CHECK(status_of([&] { svc.result_json("nope"); }) == 404);
  CHECK(status_of([&] { svc.update_params("nope", json::object()); }) == 404);
  CHECK(status_of([&] { svc.delete_session("nope"); }) == 404);
  const auto info = svc.create_session(testkit::layered_scene_png());
  CHECK(info.width == 240);
  CHECK(info.height == 180);
  CHECK(status_of([&] { svc.stage_png(info.id, "sparkles", std::nullopt); }) == 400);
  CHECK(status_of([&] { svc.stage_png("nope", "gray", std::nullopt); }) == 404);
}

TEST_CASE("invalid parameters are rejected with the field path and leave the session alone") {
  TuningService svc;
  const auto id = svc.create_session(testkit::layered_scene_png()).id;
  const auto before = svc.describe(id);
  const auto e = error_of([&] { svc.update_params(id, {{"layers", {{"bottom", {{"bilateral", {{"sigma_s", -1}}}}}}}}); });
  CHECK(e.status() == 422);
  CHECK(e.body()["field"] == "layers[2].bilateral.sigma_s");
  CHECK(status_of([&] { svc.update_params(id, {{"mode", "sideways"}}); }) == 422);
  CHECK(status_of([&] { svc.update_params(id, {{"no_such_field", 1}}); }) == 422);
  CHECK(svc.describe(id) == before);
}

TEST_CASE("upstream failures surface as 409 with the pipeline error") {
  TuningService svc;
  const auto id = svc.create_session(testkit::layered_scene_png()).id;
  svc.update_params(id, light_patch());
  svc.update_params(id, {{"layers", {{"top", {{"seg", {{"strel_radius", 80}}}}}}}});
  const auto e = error_of([&] { svc.stage_png(id, "markers", std::nullopt); });
  CHECK(e.status() == 409);
  CHECK(e.body()["error"] == "EmptyMarkers");
  CHECK(e.body()["layer"] == "top");
  CHECK(status_of([&] { svc.result_json(id); }) == 409);
  // Stages upstream of the failure still render.
  CHECK(status_of([&] { svc.stage_png(id, "filtered", Layer::Top); }) == 200);
  CHECK(status_of([&] { svc.stage_png(id, "markers", Layer::Middle); }) == 200);
}

TEST_CASE("every viewable stage renders a PNG of the right size") {
  TuningService svc;
  const auto id = svc.create_session(testkit::layered_scene_png()).id;
  svc.update_params(id, light_patch());
  for (auto stage : kViewableStages) {
    const auto whole = decode_image(svc.stage_png(id, stage, std::nullopt));
    CHECK_MESSAGE(whole.width() == 240, stage);
    CHECK_MESSAGE(whole.height() == 180, stage);
    const auto band = decode_image(svc.stage_png(id, stage, Layer::Middle));
    CHECK_MESSAGE(band.height() == 60, stage);
  }
  CHECK(svc.stage_png(id, "overlay", std::nullopt) ==
        encode_png(process(decode_image(testkit::layered_scene_png()), testkit::light_config()).overlay));
}

TEST_CASE("result equals a cold pipeline run") {
  TuningService svc;
  const auto id = svc.create_session(testkit::layered_scene_png()).id;
  svc.update_params(id, light_patch());
  CHECK(svc.result_json(id) == cold_report(testkit::light_config()));
  svc.update_params(id, {{"mode", "averaged"}});
  CHECK(svc.result_json(id) == cold_report(testkit::light_config(Mode::Averaged)));
}

TEST_CASE("cached stages are reused and only invalidated stages recompute") {
  TuningService svc;
  const auto id = svc.create_session(testkit::layered_scene_png()).id;
  svc.update_params(id, light_patch(Mode::Averaged));
  const auto c0 = svc.computations();
  svc.result_json(id);
  const auto cold = svc.computations() - c0;
  CHECK(cold == 2 + 3 * 6 + 1);  // gray, tone, six per-layer stages, analysis

  const auto c1 = svc.computations();
  svc.result_json(id);
  CHECK(svc.computations() == c1);

  const auto inv = svc.update_params(id, {{"calibration", {{"convex_threshold", 0.6}}}});
  CHECK(names(inv["invalidated"]) == std::set<std::string>{"analysis", "render"});
  const auto c2 = svc.computations();
  svc.result_json(id);
  CHECK(svc.computations() - c2 == 1);

  const auto inv2 = svc.update_params(id, {{"layers", {{"bottom", {{"bilateral", {{"sigma_s", 3.0}}}}}}}});
  const auto c3 = svc.computations();
  svc.result_json(id);
  CHECK(svc.computations() - c3 == names(inv2["invalidated"]).size() - 1);  // render not needed for the result
  const auto cached = names(svc.describe(id)["cached_stages"]);
  CHECK(cached.count("relief:top") == 1);
  CHECK(cached.count("labels:middle") == 1);
}

TEST_CASE("randomized update sequences agree with cold runs") {
  TuningService svc;
  const auto id = svc.create_session(testkit::layered_scene_png()).id;
  svc.update_params(id, light_patch());
  PipelineConfig mirror = testkit::light_config();
  std::mt19937 rng(5);
  for (int step = 0; step < 8; ++step) {
    json patch;
    const auto li = rng() % 3;
    const std::string lname(to_string(static_cast<Layer>(li)));
    switch (rng() % 5) {
      case 0: {
        const double s = 1.5 + 0.5 * static_cast<double>(rng() % 3);
        patch = {{"layers", {{lname, {{"bilateral", {{"sigma_s", s}}}}}}}};
        mirror.layers[li].bilateral.sigma_s = s;
        break;
      }
      case 1: {
        const int r = 5 + static_cast<int>(rng() % 3);
        patch = {{"layers", {{lname, {{"seg", {{"strel_radius", r}}}}}}}};
        mirror.layers[li].seg.strel_radius = r;
        break;
      }
      case 2: {
        const double t = 0.6 + 0.05 * static_cast<double>(rng() % 5);
        patch = {{"calibration", {{"convex_threshold", t}}}};
        mirror.calibration.convex_threshold = t;
        break;
      }
      case 3: {
        const Mode m = rng() % 2 ? Mode::Stitched : Mode::Averaged;
        patch = {{"mode", std::string(to_string(m))}};
        mirror.mode = m;
        break;
      }
      default: {
        const double b = 800.0 + 100.0 * static_cast<double>(rng() % 5);
        patch = {{"calibration", {{"ball_area_px", b}}}};
        mirror.calibration.ball_area_px = b;
        break;
      }
    }
    svc.update_params(id, patch);
    CHECK(config_to_json(config_from_json(svc.describe(id)["config"])) == config_to_json(mirror));
    if (step % 2 == 1 || step == 7) CHECK(svc.result_json(id) == cold_report(mirror));
  }
}

TEST_CASE("sessions are isolated") {
  TuningService svc;
  const auto a = svc.create_session(testkit::layered_scene_png(7)).id;
  const auto b = svc.create_session(testkit::layered_scene_png(9)).id;
  CHECK(a != b);
  svc.update_params(a, light_patch());
  svc.update_params(b, light_patch(Mode::Averaged));
  const auto ra = svc.result_json(a);
  svc.update_params(b, {{"calibration", {{"convex_threshold", 0.5}}}});
  const auto rb = svc.result_json(b);
  CHECK(svc.result_json(a) == ra);
  CHECK(ra == cold_report(testkit::light_config(), 7));
  auto cfg_b = testkit::light_config(Mode::Averaged);
  cfg_b.calibration.convex_threshold = 0.5;
  CHECK(rb == cold_report(cfg_b, 9));
  svc.delete_session(a);
  CHECK(status_of([&] { svc.describe(a); }) == 404);
  CHECK(svc.result_json(b) == rb);
}

TEST_CASE("concurrent requests for one stale stage compute it once") {
  TuningService svc;
  const auto id = svc.create_session(testkit::layered_scene_png()).id;
  svc.update_params(id, light_patch());
  const auto c0 = svc.computations();
  std::vector<std::string> results(4);
  {
    std::vector<std::jthread> threads;
    for (auto& r : results) threads.emplace_back([&] { r = svc.result_json(id); });
  }
  const auto once = svc.computations() - c0;
  CHECK(once == 2 + 3 * 5 + 1 + 1);  // gray, tone, five per-layer stages, stitched labels, analysis
  for (const auto& r : results) CHECK(r == results[0]);
}

TEST_CASE("idle sessions expire") {
  TuningService svc(ServiceOptions{.session_ttl = std::chrono::seconds(60)});
  const auto id = svc.create_session(testkit::layered_scene_png()).id;
  const auto now = std::chrono::steady_clock::now();
  CHECK(svc.expire_idle(now + std::chrono::seconds(30)) == 0);
  CHECK(svc.session_count() == 1);
  CHECK(svc.expire_idle(now + std::chrono::seconds(120)) == 1);
  CHECK(status_of([&] { svc.describe(id); }) == 404);
}

TEST_CASE("session dir spills uploads and recovers them") {
  testkit::TempDir dir;
  std::string id;
  {
    TuningService svc(ServiceOptions{.session_dir = dir.path()});
    id = svc.create_session(testkit::layered_scene_png()).id;
    CHECK(std::filesystem::exists(dir / (id + ".upload")));
  }
  TuningService revived(ServiceOptions{.session_dir = dir.path()});
  CHECK(revived.describe(id)["width"] == 240);
  revived.delete_session(id);
  CHECK_FALSE(std::filesystem::exists(dir / (id + ".upload")));
}
