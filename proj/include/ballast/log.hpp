#pragma once

#include <spdlog/spdlog.h>

namespace ballast {

/// Reads BALLAST_LOG={error,warn,info,debug} and configures the default
/// spdlog logger (stderr). Unset or unknown values mean "warn".
void init_logging_from_env();

}  // namespace ballast
