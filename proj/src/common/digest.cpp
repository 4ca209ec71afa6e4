#include "ballast/digest.hpp"

#include <openssl/sha.h>

#include <array>
#include <cstdio>

namespace ballast {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, SHA256_DIGEST_LENGTH> hash{};
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), hash.data());
  std::string out;
  out.reserve(hash.size() * 2);
  char buf[3];
  for (unsigned char byte : hash) {
    std::snprintf(buf, sizeof(buf), "%02x", byte);
    out += buf;
  }
  return out;
}

std::string short_digest(std::string_view data) { return sha256_hex(data).substr(0, 16); }

}  // namespace ballast
