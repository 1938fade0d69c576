#pragma once

#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "httplib.h"

#include "sarfmap/errors.hpp"
#include "sarfmap/map_document.hpp"

namespace sarfmap {

inline constexpr const char* kMapPath = "/map.sarfmap";

// Minimal landing page; the interactive viewer is served from the assets mount.
inline std::string viewer_index_html() {
  return "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>sarfmap</title></head>\n"
         "<body><pre id=\"summary\">loading map...</pre>\n<script>\n"
         "fetch('/map.sarfmap').then(r => r.json()).then(doc => {\n"
         "  document.getElementById('summary').textContent =\n"
         "    `${doc.schema}\\nblocks ${doc.blocks.length}\\nbuildings ${doc.buildings.length}\\n` +\n"
         "    `streets ${doc.streets.length}\\nlinks ${doc.links.length}\\nkeywords ${doc.keywords.length}`;\n"
         "}).catch(e => { document.getElementById('summary').textContent = 'load error: ' + e; });\n"
         "</script></body></html>\n";
}

// Read-only HTTP server for one map document. The bytes never change after
// construction, so concurrent requests all see the same response.
class MapServer {
 public:
  explicit MapServer(std::string map_bytes, std::optional<std::string> assets_dir = std::nullopt)
      : bytes_(std::move(map_bytes)), server_(std::make_unique<httplib::Server>()) {
    parse_map_document(bytes_);
    // no SO_REUSEPORT: a second server on a taken port must fail, not share it
    server_->set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof yes);
    });
    server_->Get(kMapPath, [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(bytes_, "application/json");
    });
    server_->Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(viewer_index_html(), "text/html");
    });
    if (assets_dir && !server_->set_mount_point("/assets", *assets_dir))
      throw Error("viewer assets directory '" + *assets_dir + "' does not exist");
  }

  MapServer(const MapServer&) = delete;
  MapServer& operator=(const MapServer&) = delete;
  ~MapServer() { stop(); }

  // Binds the port (0 picks a free one) and returns it.
  int bind(const std::string& host, int port) {
    if (port == 0) {
      int chosen = server_->bind_to_any_port(host);
      if (chosen < 0) throw Error("cannot bind " + host);
      port_ = chosen;
    } else {
      if (!server_->bind_to_port(host, port)) throw Error("port " + std::to_string(port) + " is busy");
      port_ = port;
    }
    return port_;
  }

  // Blocks until stop() is called from another thread.
  void run() { server_->listen_after_bind(); }

  void start() {
    thread_ = std::thread([this] { run(); });
    server_->wait_until_ready();
  }

  void stop() {
    if (server_->is_running()) server_->stop();
    if (thread_.joinable()) thread_.join();
  }

  int port() const noexcept { return port_; }
  const std::string& bytes() const noexcept { return bytes_; }

 private:
  std::string bytes_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace sarfmap
