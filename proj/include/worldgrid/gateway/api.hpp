// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "worldgrid/common/error.hpp"
#include "worldgrid/gateway/testbed.hpp"

namespace worldgrid::gateway {

inline constexpr std::string_view kApiPrefix = "/v1";

struct ApiRequest {
  std::string method;  // GET, POST, DELETE
  std::string path;    // below the /v1 prefix, e.g. "/jobs/job-000001"
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// {code, message, status}
nlohmann::json api_error(ErrorCode code, const std::string& message);

// The versioned gateway contract over one testbed. Not thread-safe: the
// HTTP server serialises calls.
class Api {
 public:
  // `brokers` fixes the order GET /brokers reports; empty means all brokers
  // in id order. Throws InvalidArgument for unknown ids or when the list
  // ends up empty.
  explicit Api(Testbed& testbed, std::vector<std::string> brokers = {});

  ApiResponse handle(const ApiRequest& request);

  Testbed& testbed() noexcept { return testbed_; }
  const std::vector<std::string>& brokers() const noexcept { return brokers_; }

  // With an automatic clock POST /sim/advance is refused.
  void set_manual_clock(bool manual) noexcept { manual_clock_ = manual; }

 private:
  ApiResponse route(const ApiRequest& request);

  Testbed& testbed_;
  std::vector<std::string> brokers_;
  bool manual_clock_ = true;
};

}  // namespace worldgrid::gateway
