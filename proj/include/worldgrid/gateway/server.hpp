// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <string>

#include "worldgrid/gateway/api.hpp"

namespace worldgrid::gateway {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  bool interactive = false;
  double scale = 1.0;  // virtual seconds per wall-clock second
};

// HTTP front of an Api under /v1. Requests and the interactive clock share
// one mutex, so the simulation has a single writer at any time.
class GatewayServer {
 public:
  GatewayServer(Api& api, ServerConfig config);
  ~GatewayServer();
  GatewayServer(const GatewayServer&) = delete;
  GatewayServer& operator=(const GatewayServer&) = delete;

  // Binds the socket; returns the port. Throws std::runtime_error.
  int bind();
  // Serves on a background thread (binding first if needed).
  void start();
  // Serves on the calling thread until stop().
  void run();
  void stop();
  int port() const noexcept { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  ServerConfig config_;
  int port_ = -1;
};

}  // namespace worldgrid::gateway
