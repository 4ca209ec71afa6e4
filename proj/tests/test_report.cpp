#include <fstream>
#include <sstream>

#include "doctest.h"

#include "ballast/report.hpp"
#include "tempdir.hpp"

using namespace ballast;

namespace {

const std::string kHeader =
    "image,mode,final_pds,pds_top,pds_middle,pds_bottom,n_small,n_typical,n_large,n_convexfail,params_digest\n";

BatchReportRow stitched_row() {
  BatchReportRow r;
  r.image = "a.png";
  r.mode = Mode::Stitched;
  r.final_pds = 12.3456789;
  r.n_small = 3;
  r.n_typical = 10;
  r.n_large = 1;
  r.n_convexfail = 2;
  r.params_digest = "abc123";
  return r;
}

BatchReportRow averaged_row() {
  BatchReportRow r = stitched_row();
  r.image = "b.jpg";
  r.mode = Mode::Averaged;
  r.per_layer_pds = std::array<double, 3>{10.0, 20.125, 33.333333};
  r.final_pds = (10.0 + 20.125 + 33.333333) / 3.0;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("empty rows give a header-only CSV") { CHECK(report_csv({}) == kHeader); }

TEST_CASE("stitched row leaves per-layer columns empty") {
  CHECK(report_csv({stitched_row()}) == kHeader + "a.png,stitched,12.35,,,,3,10,1,2,abc123\n");
  const auto j = report_json({stitched_row()});
  REQUIRE(j.size() == 1);
  CHECK_FALSE(j[0].contains("pds_top"));
  CHECK_FALSE(j[0].contains("pds_middle"));
  CHECK_FALSE(j[0].contains("pds_bottom"));
  CHECK(j[0]["final_pds"].get<double>() == 12.3456789);
}

TEST_CASE("averaged row fills per-layer columns") {
  CHECK(report_csv({averaged_row()}) == kHeader + "b.jpg,averaged,21.15,10.00,20.12,33.33,3,10,1,2,abc123\n");
  const auto j = report_json({averaged_row()});
  CHECK(j[0]["pds_middle"].get<double>() == 20.125);
}

TEST_CASE("json keys match the csv header") {
  const auto j = report_json({averaged_row()});
  std::string header = kHeader.substr(0, kHeader.size() - 1);
  std::stringstream ss(header);
  std::string key;
  std::size_t n = 0;
  while (std::getline(ss, key, ',')) {
    CHECK_MESSAGE(j[0].contains(key), key);
    ++n;
  }
  CHECK(j[0].size() == n);
}

TEST_CASE("json rows round-trip at full precision") {
  const std::vector<BatchReportRow> rows{stitched_row(), averaged_row()};
  CHECK(rows_from_json(report_json(rows)) == rows);
  CHECK(rows_from_json(nlohmann::json::parse(report_json(rows).dump())) == rows);
}

TEST_CASE("csv quotes awkward file names") {
  BatchReportRow r = stitched_row();
  r.image = "dir,with \"quotes\"/x.png";
  const auto csv = report_csv({r});
  CHECK(csv.find("\"dir,with \"\"quotes\"\"/x.png\",stitched") != std::string::npos);
}

TEST_CASE("emit_report writes both formats") {
  testkit::TempDir dir;
  const std::vector<BatchReportRow> rows{stitched_row(), averaged_row()};
  emit_report(rows, ReportFormat::Csv, dir / "r.csv");
  emit_report(rows, ReportFormat::Json, dir / "r.json");
  CHECK(slurp(dir / "r.csv") == report_csv(rows));
  CHECK(rows_from_json(nlohmann::json::parse(slurp(dir / "r.json"))) == rows);
  CHECK_THROWS_AS(emit_report(rows, ReportFormat::Csv, dir / "missing" / "r.csv"), Error);
}

TEST_CASE("make_row copies the report summary") {
  DegradationReport rep;
  rep.mode = Mode::Averaged;
  rep.final_pds = 42.0;
  rep.per_layer_pds = std::array<double, 3>{40.0, 42.0, 44.0};
  rep.params_digest = "d";
  SegmentRecord small;
  small.category = Category::Small;
  SegmentRecord typical;
  typical.category = Category::Typical;
  rep.segments = {small, small, typical};
  const auto row = make_row("x.png", rep);
  CHECK(row.n_small == 2);
  CHECK(row.n_typical == 1);
  CHECK(row.n_large == 0);
  CHECK(row.per_layer_pds == rep.per_layer_pds);
  CHECK(row.final_pds == 42.0);
  CHECK(row.params_digest == "d");
}
