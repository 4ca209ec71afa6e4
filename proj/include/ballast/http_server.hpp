#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "ballast/service.hpp"

namespace ballast::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  ServiceOptions service;
  std::optional<std::filesystem::path> static_dir;  // tuner UI bundle
};

/// HTTP/1.1 front end of TuningService.
///   POST   /api/sessions                    multipart "image" (or raw body) -> 201 {id, width, height}
///   GET    /api/sessions/{id}               config and cache status
///   PATCH  /api/sessions/{id}/params        partial config -> {invalidated: [...]}
///   GET    /api/sessions/{id}/stages/{name}?layer=top|middle|bottom  -> image/png
///   GET    /api/sessions/{id}/result        report JSON
///   DELETE /api/sessions/{id}               204
class HttpServer {
 public:
  explicit HttpServer(ServerOptions options);
  ~HttpServer();

  /// Binds the socket; returns the bound port. Throws IoError on failure.
  int bind();
  /// Serves until stop(); call bind() first.
  void run();
  void stop();
  /// Blocks until run() is accepting connections.
  void wait_until_ready() const;

  TuningService& service();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ballast::service
