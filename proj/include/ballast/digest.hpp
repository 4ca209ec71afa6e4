#pragma once

#include <string>
#include <string_view>

namespace ballast {

/// Lowercase hex SHA-256 of the input bytes.
std::string sha256_hex(std::string_view data);

/// First 16 hex digits of the SHA-256; used as a short stable fingerprint.
std::string short_digest(std::string_view data);

}  // namespace ballast
