#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace wristmood::tools {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path ema_log;
  std::optional<std::filesystem::path> static_dir;
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> features;  // table re-read on each request
};

/// HTTP endpoint collecting EMA submissions.
///
///   POST /ema         append one record (201, 400, 409, 422)
///   GET  /ema         the log, one record per line, in submission order
///   GET  /health      status and entry count
///   GET  /prediction  mood of the latest feature window (when configured)
///   GET  /*           static files of the web client (when configured)
class EmaServer {
 public:
  explicit EmaServer(ServerOptions options);
  ~EmaServer();
  EmaServer(const EmaServer&) = delete;
  EmaServer& operator=(const EmaServer&) = delete;

  /// Binds the socket; returns the bound port.
  int bind();
  /// Serves until stop(); call bind() first.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wristmood::tools
