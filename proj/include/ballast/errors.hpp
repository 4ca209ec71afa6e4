#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ballast {

enum class ErrorCode {
  FileNotFound,
  UnsupportedFormat,
  CorruptImage,
  IoError,
  ImageTooSmall,
  WidthMismatch,
  ShapeMismatch,
  MarkerExceedsMask,
  EmptyMarkers,
  DegenerateHistogram,
  NoSeeds,
  MissingRecord,
  InvalidParameter,
};

std::string_view to_string(ErrorCode code);

/// Horizontal band of a cross-section image. Order is top to bottom.
enum class Layer : std::uint8_t { Top = 0, Middle = 1, Bottom = 2 };

std::string_view to_string(Layer layer);
std::optional<Layer> layer_from_string(std::string_view name);

/// Every failure raised by the library. Pipeline stages that run per layer
/// re-throw with the layer attached so callers can tell which band failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail, std::optional<Layer> layer = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<Layer> layer() const noexcept { return layer_; }

  Error with_layer(Layer layer) const { return Error(code_, detail_, layer); }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<Layer> layer_;
};

/// Invalid configuration value; `field` is the JSON path of the offending
/// field, e.g. "layers[2].bilateral.sigma_s".
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& reason)
      : Error(ErrorCode::InvalidParameter, field + ": " + reason), field_(std::move(field)), reason_(reason) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

}  // namespace ballast
