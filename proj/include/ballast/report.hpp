#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ballast/analysis.hpp"

namespace ballast {

/// One line of a batch report.
struct BatchReportRow {
  std::string image;
  Mode mode = Mode::Stitched;
  double final_pds = 0.0;
  std::optional<std::array<double, 3>> per_layer_pds;  // averaged mode only
  std::int64_t n_small = 0;
  std::int64_t n_typical = 0;
  std::int64_t n_large = 0;
  std::int64_t n_convexfail = 0;
  std::string params_digest;

  friend bool operator==(const BatchReportRow&, const BatchReportRow&) = default;
};

BatchReportRow make_row(const std::string& image, const DegradationReport& report);

enum class ReportFormat { Csv, Json };

/// Header plus one line per row; PDS values with 2 decimals, per-layer
/// columns left empty in stitched mode.
std::string report_csv(const std::vector<BatchReportRow>& rows);

/// Array of row objects with the CSV column names as keys, full precision,
/// per-layer keys omitted in stitched mode.
nlohmann::json report_json(const std::vector<BatchReportRow>& rows);
std::vector<BatchReportRow> rows_from_json(const nlohmann::json& j);

/// Writes the report; throws IoError.
void emit_report(const std::vector<BatchReportRow>& rows, ReportFormat format, const std::filesystem::path& path);

}  // namespace ballast
