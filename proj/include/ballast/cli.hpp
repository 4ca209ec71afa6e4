#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ballast::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point of the `ballast` tool. Exit codes: 0 success, 1 when at least
/// one image failed, 2 for usage or configuration errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ballast::cli
