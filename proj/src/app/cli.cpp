#include "ballast/cli.hpp"

#include <algorithm>
#include <csignal>
#include <filesystem>
#include <optional>

#include "CLI11.hpp"

#include "ballast/http_server.hpp"
#include "ballast/imageio.hpp"
#include "ballast/log.hpp"
#include "ballast/report.hpp"
#include "ballast/serialize.hpp"

namespace ballast::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ProcessOptions {
  std::string input;
  std::string out;
  std::string config;
  std::string mode;
  std::optional<double> gamma;
  std::optional<double> brightness;
  std::string reference;
  std::vector<int> strel;
  std::vector<double> sigma_s;
  std::vector<double> sigma_r;
  std::optional<double> convex_threshold;
  std::optional<double> ball_area_px;
  std::string report = "both";
  std::string color_key;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  double max_upload_mb = 50;
  int session_ttl_sec = 1800;
  std::string static_dir;
  std::string session_dir;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-layer flag values: one value applies to every layer, three are top/middle/bottom.
template <typename T>
void patch_layers(json& patch, const std::vector<T>& values, const char* flag, const char* group, const char* key) {
  if (values.empty()) return;
  if (values.size() != 1 && values.size() != 3) {
    throw UsageError(std::string(flag) + " takes one value or three comma-separated values");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    patch["layers"][i][group][key] = values.size() == 1 ? values[0] : values[i];
  }
}

// Defaults < config file < individual flags. Flags go through the same
// patch/validate path as files so errors name the same fields.
PipelineConfig build_config(const ProcessOptions& o) {
  PipelineConfig cfg = o.config.empty() ? default_config() : load_config(o.config);
  json patch = json::object();
  if (!o.mode.empty()) patch["mode"] = o.mode;
  if (o.gamma || o.brightness) {
    const ToneParams base = cfg.tone.value_or(ToneParams{});
    patch["tone"] = {{"gamma", o.gamma.value_or(base.gamma)},
                     {"brightness_gain", o.brightness.value_or(base.brightness_gain)}};
  }
  if (!o.reference.empty()) patch["reference_image"] = o.reference;
  patch_layers(patch, o.strel, "--strel", "seg", "strel_radius");
  patch_layers(patch, o.sigma_s, "--sigma-s", "bilateral", "sigma_s");
  patch_layers(patch, o.sigma_r, "--sigma-r", "bilateral", "sigma_r");
  if (o.convex_threshold) patch["calibration"]["convex_threshold"] = *o.convex_threshold;
  if (o.ball_area_px) patch["calibration"]["ball_area_px"] = *o.ball_area_px;
  return apply_config_patch(cfg, patch);
}

bool is_image_path(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<fs::path> collect_inputs(const fs::path& input) {
  if (!fs::exists(input)) throw UsageError("input not found: " + input.string());
  if (!fs::is_directory(input)) return {input};
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && is_image_path(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

int run_process(const ProcessOptions& o, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  ColorKey key = default_color_key();
  std::vector<fs::path> inputs;
  try {
    cfg = build_config(o);
    if (!o.color_key.empty()) key = load_color_key(o.color_key);
    inputs = collect_inputs(o.input);
    fs::create_directories(o.out);
  } catch (const ConfigError& e) {
    err << "configuration error in field '" << e.field() << "': " << e.reason() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  spdlog::info("processing {} image(s), params {}", inputs.size(), config_digest(cfg));
  std::vector<BatchReportRow> rows;
  bool failed = false;
  for (const auto& path : inputs) {
    try {
      const auto result = process(load_image(path), cfg, key);
      const fs::path stem = fs::path(o.out) / path.stem();
      write_file(stem.string() + ".overlay.png", encode_png(result.overlay));
      const std::string doc = report_document(result.report, cfg);
      write_file(stem.string() + ".report.json",
                 std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(doc.data()), doc.size()));
      rows.push_back(make_row(path.string(), result.report));
      out << path.string() << ": PDS " << fmt::format("{:.2f}", result.report.final_pds) << "%\n";
    } catch (const std::exception& e) {
      failed = true;
      err << "error: " << path.string() << ": " << e.what() << "\n";
    }
  }

  try {
    if (o.report == "csv" || o.report == "both") emit_report(rows, ReportFormat::Csv, fs::path(o.out) / "report.csv");
    if (o.report == "json" || o.report == "both") {
      emit_report(rows, ReportFormat::Json, fs::path(o.out) / "report.json");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return failed ? 1 : 0;
}

service::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

int run_serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
  service::ServerOptions opts;
  opts.host = o.host;
  opts.port = o.port;
  opts.service.max_upload_bytes = static_cast<std::size_t>(o.max_upload_mb * 1024.0 * 1024.0);
  opts.service.session_ttl = std::chrono::seconds(o.session_ttl_sec);
  if (!o.static_dir.empty()) opts.static_dir = o.static_dir;
  if (!o.session_dir.empty()) opts.service.session_dir = o.session_dir;
  try {
    service::HttpServer server(opts);
    const int port = server.bind();
    out << "listening on http://" << o.host << ":" << port << std::endl;
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.run();
    g_server = nullptr;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  init_logging_from_env();

  CLI::App app{"Ballast degradation analysis from cross-section images"};
  app.require_subcommand(1);

  ProcessOptions po;
  auto* process_cmd = app.add_subcommand("process", "Segment images and write overlays and PDS reports");
  process_cmd->add_option("--input", po.input, "Image file or directory of images")->required();
  process_cmd->add_option("--out", po.out, "Output directory")->required();
  process_cmd->add_option("--config", po.config, "JSON configuration file");
  process_cmd->add_option("--mode", po.mode, "stitched or averaged")->check(CLI::IsMember({"stitched", "averaged"}));
  process_cmd->add_option("--gamma", po.gamma, "Gamma exponent");
  process_cmd->add_option("--brightness", po.brightness, "Brightness gain (1.3 = +30%)");
  process_cmd->add_option("--reference", po.reference, "Reference image for histogram matching");
  process_cmd->add_option("--strel", po.strel, "Strel radius, N or top,middle,bottom")->delimiter(',');
  process_cmd->add_option("--sigma-s", po.sigma_s, "Spatial width, F or top,middle,bottom")->delimiter(',');
  process_cmd->add_option("--sigma-r", po.sigma_r, "Range width (0-255 scale), F or top,middle,bottom")
      ->delimiter(',');
  process_cmd->add_option("--convex-threshold", po.convex_threshold, "Convexity screen threshold");
  process_cmd->add_option("--ball-area-px", po.ball_area_px, "Pixel area of the 1-inch calibration ball");
  process_cmd->add_option("--report", po.report, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
  process_cmd->add_option("--color-key", po.color_key, "JSON color key (64 RGB triples)");

  ServeOptions so;
  auto* serve_cmd = app.add_subcommand("serve", "Run the interactive tuning service");
  serve_cmd->add_option("--host", so.host, "Bind address");
  serve_cmd->add_option("--port", so.port, "TCP port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--max-upload-mb", so.max_upload_mb, "Upload size limit")->check(CLI::PositiveNumber);
  serve_cmd->add_option("--session-ttl-sec", so.session_ttl_sec, "Idle session lifetime")->check(CLI::PositiveNumber);
  serve_cmd->add_option("--static-dir", so.static_dir, "Directory with the tuner UI bundle");
  serve_cmd->add_option("--session-dir", so.session_dir, "Spill uploads here for crash recovery");

  auto* version_cmd = app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*process_cmd) return run_process(po, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (*serve_cmd) return run_serve(so, out, err);
  if (*version_cmd) out << "ballast " << kVersion << "\n";
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"ballast"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ballast::cli
