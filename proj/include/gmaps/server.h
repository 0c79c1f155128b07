#pragma once

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace gmaps {

// Read-only static file service for a build directory (manifest.json and
// level SVGs) and, optionally, a directory of viewer assets. Files in the
// build directory win over assets with the same name. GET only.
class ManifestServer {
 public:
  // Throws ValidationError if dir has no manifest.json or a directory is missing.
  explicit ManifestServer(const std::string& dir, const std::string& assets_dir = "");
  ~ManifestServer();
  ManifestServer(const ManifestServer&) = delete;
  ManifestServer& operator=(const ManifestServer&) = delete;

  // Throws Error("port ... busy") when the port cannot be bound. Port 0 picks a
  // free port. Returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace gmaps
