#include <fstream>
#include <sstream>

#include "doctest.h"

#include "ballast/cli.hpp"
#include "ballast/report.hpp"
#include "ballast/serialize.hpp"
#include "scenes.hpp"
#include "tempdir.hpp"

using namespace ballast;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Outcome run_process(const fs::path& input, const fs::path& out, std::vector<std::string> extra = {}) {
  std::vector<std::string> args{"process", "--input", input.string(), "--out", out.string()};
  args.insert(args.end(), extra.begin(), extra.end());
  return run(args);
}

std::vector<std::string> with_light(std::vector<std::string> extra = {}) {
  auto flags = testkit::light_flags();
  flags.insert(flags.end(), extra.begin(), extra.end());
  return flags;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("version subcommand") {
  const auto r = run({"version"});
  CHECK(r.code == 0);
  CHECK(r.out == std::string("ballast ") + cli::kVersion + "\n");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"process", "--input", "x.png"}).code == 2);
  CHECK(run({"process", "--input", "x.png", "--out", "o", "--mode", "diagonal"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("process writes overlay, per-image report and batch reports") {
  testkit::TempDir dir;
  save_png(testkit::layered_scene(), dir / "scene.png");
  const auto r = run_process(dir / "scene.png", dir / "out", with_light());
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(fs::exists(dir / "out" / "scene.overlay.png"));
  CHECK(fs::exists(dir / "out" / "report.csv"));
  CHECK(fs::exists(dir / "out" / "report.json"));

  const PipelineConfig cfg = testkit::light_config();
  const auto expected = process(load_image(dir / "scene.png"), cfg);
  CHECK(slurp(dir / "out" / "scene.report.json") == report_document(expected.report, cfg));
  const auto overlay = slurp(dir / "out" / "scene.overlay.png");
  const auto expected_png = encode_png(expected.overlay);
  CHECK(overlay == std::string(expected_png.begin(), expected_png.end()));

  const auto rows = rows_from_json(nlohmann::json::parse(slurp(dir / "out" / "report.json")));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == make_row((dir / "scene.png").string(), expected.report));
  CHECK(line_count(slurp(dir / "out" / "report.csv")) == 2);
  char pds[32];
  std::snprintf(pds, sizeof pds, "PDS %.2f%%", expected.report.final_pds);
  CHECK(r.out.find(pds) != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  testkit::TempDir dir;
  save_png(testkit::layered_scene(), dir / "scene.png");
  REQUIRE(run_process(dir / "scene.png", dir / "a", with_light()).code == 0);
  REQUIRE(run_process(dir / "scene.png", dir / "b", with_light()).code == 0);
  for (const char* name : {"scene.overlay.png", "scene.report.json", "report.csv", "report.json"}) {
    CHECK_MESSAGE(slurp(dir / "a" / name) == slurp(dir / "b" / name), name);
  }
}

TEST_CASE("directory input is processed in sorted order and failures are skipped") {
  testkit::TempDir dir;
  fs::create_directories(dir / "in");
  save_png(testkit::layered_scene(3), dir / "in" / "b.png");
  save_png(testkit::layered_scene(5), dir / "in" / "a.png");
  write_text(dir / "in" / "c.png", "not a png at all");
  write_text(dir / "in" / "notes.txt", "ignored");

  const auto r = run_process(dir / "in", dir / "out", with_light());
  CHECK(r.code == 1);
  CHECK(r.err.find("c.png") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "a.overlay.png"));
  CHECK(fs::exists(dir / "out" / "b.overlay.png"));
  CHECK_FALSE(fs::exists(dir / "out" / "c.overlay.png"));

  const auto rows = rows_from_json(nlohmann::json::parse(slurp(dir / "out" / "report.json")));
  REQUIRE(rows.size() == 2);
  CHECK(fs::path(rows[0].image).filename() == "a.png");
  CHECK(fs::path(rows[1].image).filename() == "b.png");
  CHECK(line_count(slurp(dir / "out" / "report.csv")) == 3);
}

TEST_CASE("invalid values exit with 2 and name the field") {
  testkit::TempDir dir;
  save_png(testkit::layered_scene(), dir / "scene.png");
  auto r = run_process(dir / "scene.png", dir / "out", {"--sigma-s", "8,8,-1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("layers[2].bilateral.sigma_s") != std::string::npos);

  r = run_process(dir / "scene.png", dir / "out", {"--convex-threshold", "1.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("calibration.convex_threshold") != std::string::npos);

  r = run_process(dir / "scene.png", dir / "out", {"--strel", "6,6"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--strel") != std::string::npos);

  r = run_process(dir / "missing.png", dir / "out");
  CHECK(r.code == 2);

  write_text(dir / "bad.json", R"({"layers": {"middle": {"seg": {"strel_radius": 0}}}})");
  r = run_process(dir / "scene.png", dir / "out", {"--config", (dir / "bad.json").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("layers[1].seg.strel_radius") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out" / "report.csv"));
}

TEST_CASE("flags override the config file which overrides defaults") {
  testkit::TempDir dir;
  save_png(testkit::layered_scene(), dir / "scene.png");
  write_text(dir / "cfg.json", R"({
    "mode": "averaged",
    "layers": [{"bilateral": {"sigma_s": 2, "sigma_r": 8}, "seg": {"strel_radius": 6}},
               {"bilateral": {"sigma_s": 2, "sigma_r": 8}, "seg": {"strel_radius": 6}},
               {"bilateral": {"sigma_s": 2, "sigma_r": 8}, "seg": {"strel_radius": 6}}],
    "calibration": {"ball_area_px": 1000, "convex_threshold": 0.6}
  })");
  const auto r = run_process(dir / "scene.png", dir / "out",
                             {"--config", (dir / "cfg.json").string(), "--strel", "5,6,7", "--gamma", "1.2"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto doc = nlohmann::json::parse(slurp(dir / "out" / "scene.report.json"));
  const PipelineConfig used = config_from_json(doc.at("config"));
  CHECK(used.mode == Mode::Averaged);
  CHECK(used.layer(Layer::Top).seg.strel_radius == 5);
  CHECK(used.layer(Layer::Middle).seg.strel_radius == 6);
  CHECK(used.layer(Layer::Bottom).seg.strel_radius == 7);
  CHECK(used.layer(Layer::Bottom).bilateral.sigma_s == 2.0);
  CHECK(used.calibration.convex_threshold == 0.6);
  CHECK(used.calibration.small_threshold == 0.11);
  REQUIRE(used.tone.has_value());
  CHECK(used.tone->gamma == 1.2);
  CHECK(used.tone->brightness_gain == 1.0);
  CHECK(doc.contains("per_layer_pds"));
}

TEST_CASE("report format selection") {
  testkit::TempDir dir;
  save_png(testkit::layered_scene(), dir / "scene.png");
  REQUIRE(run_process(dir / "scene.png", dir / "csv", with_light({"--report", "csv"})).code == 0);
  CHECK(fs::exists(dir / "csv" / "report.csv"));
  CHECK_FALSE(fs::exists(dir / "csv" / "report.json"));
  REQUIRE(run_process(dir / "scene.png", dir / "json", with_light({"--report", "json"})).code == 0);
  CHECK_FALSE(fs::exists(dir / "json" / "report.csv"));
  CHECK(fs::exists(dir / "json" / "report.json"));
}

TEST_CASE("pipeline failure on the only image exits with 1 and an empty report") {
  testkit::TempDir dir;
  save_png(testkit::render_disks_rgb(60, 60, {}, 0.0), dir / "black.png");
  const auto r = run_process(dir / "black.png", dir / "out", with_light());
  CHECK(r.code == 1);
  CHECK(r.err.find("EmptyMarkers") != std::string::npos);
  CHECK(line_count(slurp(dir / "out" / "report.csv")) == 1);
}
