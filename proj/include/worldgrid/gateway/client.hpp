// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "worldgrid/gateway/api.hpp"

namespace worldgrid::gateway {

// Transport-neutral access to the /v1 contract. The CLI talks through this
// so the same command runs in-process or against a server.
class Client {
 public:
  using Query = std::map<std::string, std::string>;

  virtual ~Client() = default;
  virtual ApiResponse send(const ApiRequest& request) = 0;

  // Throws the Error carried by a non-2xx response.
  nlohmann::json call(const std::string& method, const std::string& path, const Query& query = {},
                      const nlohmann::json& body = nullptr);
  std::string call_text(const std::string& method, const std::string& path);
};

class LocalClient final : public Client {
 public:
  explicit LocalClient(Api& api) : api_(api) {}
  ApiResponse send(const ApiRequest& request) override { return api_.handle(request); }

 private:
  Api& api_;
};

// Throws std::runtime_error when the server cannot be reached.
class HttpClient final : public Client {
 public:
  HttpClient(std::string host, int port);
  ~HttpClient() override;
  ApiResponse send(const ApiRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Rebuilds the Error behind an error response body.
Error error_from_response(const ApiResponse& response);

}  // namespace worldgrid::gateway
