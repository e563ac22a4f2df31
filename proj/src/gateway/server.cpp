// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/gateway/server.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <httplib.h>

namespace worldgrid::gateway {

struct GatewayServer::Impl {
  Api& api;
  httplib::Server server;
  std::mutex sim_mutex;
  std::thread listener;
  std::thread ticker;
  std::mutex stop_mutex;
  std::condition_variable stop_cv;
  bool stopping = false;

  explicit Impl(Api& a) : api(a) {}

  void dispatch(const std::string& method, const httplib::Request& req, httplib::Response& res) {
    ApiRequest request{method, "/" + req.matches[1].str(), {}, req.body};
    for (const auto& [k, v] : req.params) request.query.emplace(k, v);
    ApiResponse response;
    {
      std::lock_guard lock(sim_mutex);
      response = api.handle(request);
    }
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  }

  // Whole virtual seconds are applied every tick; the fraction carries over.
  void tick_loop(double scale) {
    using namespace std::chrono_literals;
    const auto period = 100ms;
    double carry = 0;
    std::unique_lock lock(stop_mutex);
    while (!stop_cv.wait_for(lock, period, [this] { return stopping; })) {
      carry += scale * 0.1;
      const auto whole = static_cast<SimTime>(std::floor(carry));
      if (whole <= 0) continue;
      carry -= static_cast<double>(whole);
      std::lock_guard sim(sim_mutex);
      api.testbed().advance_by(whole);
    }
  }
};

GatewayServer::GatewayServer(Api& api, ServerConfig config)
    : impl_(std::make_unique<Impl>(api)), config_(std::move(config)) {
  if (config_.interactive && !(config_.scale > 0)) throw std::invalid_argument("scale must be positive");
  api.set_manual_clock(!config_.interactive);
  const std::string route = R"(/v1/(.*))";
  auto& s = impl_->server;
  s.Get(route, [this](const httplib::Request& q, httplib::Response& r) { impl_->dispatch("GET", q, r); });
  s.Post(route, [this](const httplib::Request& q, httplib::Response& r) { impl_->dispatch("POST", q, r); });
  s.Delete(route, [this](const httplib::Request& q, httplib::Response& r) { impl_->dispatch("DELETE", q, r); });
  s.set_error_handler([](const httplib::Request& q, httplib::Response& r) {
    if (!r.body.empty()) return;
    const auto code = r.status == 404 ? ErrorCode::NotFound : ErrorCode::BadRequest;
    const auto body = api_error(code, q.method + " " + q.path + " is not part of the API");
    r.set_content(body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace), "application/json");
  });
}

GatewayServer::~GatewayServer() { stop(); }

int GatewayServer::bind() {
  if (port_ >= 0) return port_;
  if (config_.port == 0) {
    port_ = impl_->server.bind_to_any_port(config_.host);
  } else if (impl_->server.bind_to_port(config_.host, config_.port)) {
    port_ = config_.port;
  }
  if (port_ <= 0) {
    port_ = -1;
    throw std::runtime_error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
  }
  return port_;
}

void GatewayServer::start() {
  bind();
  if (config_.interactive) impl_->ticker = std::thread([this] { impl_->tick_loop(config_.scale); });
  impl_->listener = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void GatewayServer::run() {
  bind();
  if (config_.interactive) impl_->ticker = std::thread([this] { impl_->tick_loop(config_.scale); });
  impl_->server.listen_after_bind();
}

void GatewayServer::stop() {
  {
    std::lock_guard lock(impl_->stop_mutex);
    impl_->stopping = true;
  }
  impl_->stop_cv.notify_all();
  impl_->server.stop();
  if (impl_->listener.joinable()) impl_->listener.join();
  if (impl_->ticker.joinable()) impl_->ticker.join();
}

}  // namespace worldgrid::gateway
