#include "gmaps/server.h"

#include <filesystem>

#include <httplib.h>

#include "gmaps/error.h"

namespace gmaps {

ManifestServer::ManifestServer(const std::string& dir, const std::string& assets_dir)
    : server_(std::make_unique<httplib::Server>()) {
  namespace fs = std::filesystem;
  if (!fs::is_regular_file(fs::path(dir) / "manifest.json")) {
    throw ValidationError("missing manifest: no manifest.json in '" + dir + "'");
  }
  if (!server_->set_mount_point("/", dir)) throw ValidationError("cannot serve '" + dir + "'");
  if (!assets_dir.empty() && !server_->set_mount_point("/", assets_dir)) {
    throw ValidationError("cannot serve viewer assets from '" + assets_dir + "'");
  }
  // No SO_REUSEPORT, so a second server on a taken port fails to bind.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  server_->set_file_request_handler([](const httplib::Request&, httplib::Response& res) {
    res.set_header("Cache-Control", "no-cache");
  });
}

ManifestServer::~ManifestServer() = default;

int ManifestServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p < 0) throw Error("cannot bind a free port on " + host);
    return p;
  }
  if (!server_->bind_to_port(host, port)) throw Error("port " + std::to_string(port) + " busy");
  return port;
}

void ManifestServer::listen() { server_->listen_after_bind(); }

void ManifestServer::stop() { server_->stop(); }

}  // namespace gmaps
