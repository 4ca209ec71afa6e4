#include "ballast/report.hpp"

#include <fmt/format.h>

#include "ballast/imageio.hpp"

namespace ballast {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 3> kLayerColumns{"pds_top", "pds_middle", "pds_bottom"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

BatchReportRow make_row(const std::string& image, const DegradationReport& report) {
  const auto t = report.category_tally();
  BatchReportRow row;
  row.image = image;
  row.mode = report.mode;
  row.final_pds = report.final_pds;
  row.per_layer_pds = report.per_layer_pds;
  row.n_small = t.count(Category::Small);
  row.n_typical = t.count(Category::Typical);
  row.n_large = t.count(Category::Large);
  row.n_convexfail = t.count(Category::ConvexFail);
  row.params_digest = report.params_digest;
  return row;
}

std::string report_csv(const std::vector<BatchReportRow>& rows) {
  std::string out =
      "image,mode,final_pds,pds_top,pds_middle,pds_bottom,n_small,n_typical,n_large,n_convexfail,params_digest\n";
  for (const auto& r : rows) {
    out += csv_field(r.image) + "," + std::string(to_string(r.mode)) + "," + fmt::format("{:.2f}", r.final_pds);
    for (std::size_t i = 0; i < 3; ++i) {
      out += ",";
      if (r.per_layer_pds) out += fmt::format("{:.2f}", (*r.per_layer_pds)[i]);
    }
    out += fmt::format(",{},{},{},{},{}\n", r.n_small, r.n_typical, r.n_large, r.n_convexfail, r.params_digest);
  }
  return out;
}

json report_json(const std::vector<BatchReportRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json j = {
        {"image", r.image},
        {"mode", std::string(to_string(r.mode))},
        {"final_pds", r.final_pds},
        {"n_small", r.n_small},
        {"n_typical", r.n_typical},
        {"n_large", r.n_large},
        {"n_convexfail", r.n_convexfail},
        {"params_digest", r.params_digest},
    };
    if (r.per_layer_pds) {
      for (std::size_t i = 0; i < 3; ++i) j[kLayerColumns[i]] = (*r.per_layer_pds)[i];
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<BatchReportRow> rows_from_json(const json& j) {
  std::vector<BatchReportRow> rows;
  for (const auto& item : j) {
    BatchReportRow r;
    r.image = item.at("image").get<std::string>();
    const auto mode = mode_from_string(item.at("mode").get<std::string>());
    if (!mode) throw Error(ErrorCode::InvalidParameter, "report row has an unknown mode");
    r.mode = *mode;
    r.final_pds = item.at("final_pds").get<double>();
    if (item.contains(kLayerColumns[0])) {
      std::array<double, 3> p{};
      for (std::size_t i = 0; i < 3; ++i) p[i] = item.at(kLayerColumns[i]).get<double>();
      r.per_layer_pds = p;
    }
    r.n_small = item.at("n_small").get<std::int64_t>();
    r.n_typical = item.at("n_typical").get<std::int64_t>();
    r.n_large = item.at("n_large").get<std::int64_t>();
    r.n_convexfail = item.at("n_convexfail").get<std::int64_t>();
    r.params_digest = item.at("params_digest").get<std::string>();
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit_report(const std::vector<BatchReportRow>& rows, ReportFormat format, const std::filesystem::path& path) {
  const std::string text = format == ReportFormat::Csv ? report_csv(rows) : report_json(rows).dump(2) + "\n";
  write_file(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace ballast
