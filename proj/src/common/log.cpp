#include "ballast/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>

#include <cstdlib>
#include <string_view>

namespace ballast {

void init_logging_from_env() {
  auto logger = spdlog::get("ballast");
  if (!logger) logger = spdlog::stderr_color_mt("ballast");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");

  const char* env = std::getenv("BALLAST_LOG");
  const std::string_view level = env ? env : "warn";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::warn);
  }
}

}  // namespace ballast
