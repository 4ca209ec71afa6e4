#include "ballast/http_server.hpp"

#include <thread>

#include "httplib.h"

#include "ballast/log.hpp"

namespace ballast::service {

using nlohmann::json;

struct HttpServer::Impl {
  ServerOptions options;
  TuningService service;
  httplib::Server server;
  std::jthread sweeper;

  explicit Impl(ServerOptions o) : options(std::move(o)), service(options.service) {}
};

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Runs `fn`, mapping service and library errors onto HTTP statuses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const ServiceError& e) {
    send_json(res, e.status(), e.body());
  } catch (const json::exception& e) {
    send_json(res, 400, {{"error", "BadRequest"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    send_json(res, 500, {{"error", "Internal"}, {"message", e.what()}});
  }
}

std::span<const std::uint8_t> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

HttpServer::HttpServer(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
  auto& srv = impl_->server;
  auto& svc = impl_->service;
  srv.set_payload_max_length(impl_->options.service.max_upload_bytes + 64 * 1024);

  srv.Post("/api/sessions", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::string body;
      if (req.is_multipart_form_data()) {
        if (!req.has_file("image")) {
          throw ServiceError(400, {{"error", "BadRequest"}, {"message", "multipart field \"image\" missing"}});
        }
        body = req.get_file_value("image").content;
      } else {
        body = req.body;
      }
      const auto info = svc.create_session(as_bytes(body));
      send_json(res, 201, {{"id", info.id}, {"width", info.width}, {"height", info.height}});
    });
  });

  srv.Get(R"(/api/sessions/([0-9a-zA-Z_-]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, svc.describe(req.matches[1])); });
  });

  srv.Patch(R"(/api/sessions/([0-9a-zA-Z_-]+)/params)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json patch = json::parse(req.body);
      send_json(res, 200, svc.update_params(req.matches[1], patch));
    });
  });

  srv.Get(R"(/api/sessions/([0-9a-zA-Z_-]+)/stages/([a-z_]+))",
          [&svc](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
              std::optional<Layer> layer;
              if (req.has_param("layer")) {
                layer = layer_from_string(req.get_param_value("layer"));
                if (!layer) {
                  throw ServiceError(400, {{"error", "UnknownLayer"}, {"message", "layer must be top, middle or bottom"}});
                }
              }
              const auto png = svc.stage_png(req.matches[1], req.matches[2].str(), layer);
              res.status = 200;
              res.set_content(std::string(png.begin(), png.end()), "image/png");
            });
          });

  srv.Get(R"(/api/sessions/([0-9a-zA-Z_-]+)/result)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      res.status = 200;
      res.set_content(svc.result_json(req.matches[1]), "application/json");
    });
  });

  srv.Delete(R"(/api/sessions/([0-9a-zA-Z_-]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      svc.delete_session(req.matches[1]);
      res.status = 204;
    });
  });

  if (impl_->options.static_dir) {
    if (!srv.set_mount_point("/", impl_->options.static_dir->string())) {
      spdlog::warn("static dir {} not found; UI disabled", impl_->options.static_dir->string());
    }
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& srv = impl_->server;
  const auto& o = impl_->options;
  const int port = o.port == 0 ? srv.bind_to_any_port(o.host) : (srv.bind_to_port(o.host, o.port) ? o.port : -1);
  if (port < 0) throw Error(ErrorCode::IoError, "cannot bind " + o.host + ":" + std::to_string(o.port));
  return port;
}

void HttpServer::run() {
  impl_->sweeper = std::jthread([this](std::stop_token st) {
    while (!st.stop_requested()) {
      for (int i = 0; i < 50 && !st.stop_requested(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      impl_->service.expire_idle();
    }
  });
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->sweeper.joinable()) {
    impl_->sweeper.request_stop();
    impl_->sweeper.join();
  }
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

TuningService& HttpServer::service() { return impl_->service; }

}  // namespace ballast::service
