#include "ballast/errors.hpp"

namespace ballast {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptImage: return "CorruptImage";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::MarkerExceedsMask: return "MarkerExceedsMask";
    case ErrorCode::EmptyMarkers: return "EmptyMarkers";
    case ErrorCode::DegenerateHistogram: return "DegenerateHistogram";
    case ErrorCode::NoSeeds: return "NoSeeds";
    case ErrorCode::MissingRecord: return "MissingRecord";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
  }
  return "Unknown";
}

std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::Top: return "top";
    case Layer::Middle: return "middle";
    case Layer::Bottom: return "bottom";
  }
  return "unknown";
}

std::optional<Layer> layer_from_string(std::string_view name) {
  if (name == "top") return Layer::Top;
  if (name == "middle") return Layer::Middle;
  if (name == "bottom") return Layer::Bottom;
  return std::nullopt;
}

namespace {

std::string format_message(ErrorCode code, const std::string& detail, std::optional<Layer> layer) {
  std::string msg(to_string(code));
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  if (layer) {
    msg += " (layer=";
    msg += to_string(*layer);
    msg += ")";
  }
  return msg;
}

}  // namespace

Error::Error(ErrorCode code, std::string detail, std::optional<Layer> layer)
    : std::runtime_error(format_message(code, detail, layer)),
      code_(code),
      detail_(std::move(detail)),
      layer_(layer) {}

}  // namespace ballast
