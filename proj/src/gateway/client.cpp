// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/gateway/client.hpp"

#include <stdexcept>

#include <fmt/format.h>
#include <httplib.h>

namespace worldgrid::gateway {

using nlohmann::json;

Error error_from_response(const ApiResponse& response) {
  try {
    const auto body = json::parse(response.body);
    const auto code = parse_error_code(body.at("code").get<std::string>());
    const auto message = body.value("message", std::string());
    if (code) return Error(*code, message);
  } catch (const json::exception&) {
  }
  return Error(response.status == 404 ? ErrorCode::NotFound : ErrorCode::BadRequest,
               fmt::format("HTTP {}: {}", response.status, response.body));
}

json Client::call(const std::string& method, const std::string& path, const Query& query, const json& body) {
  ApiRequest request{method, path, query, body.is_null() ? std::string() : body.dump()};
  const auto response = send(request);
  if (response.status < 200 || response.status >= 300) throw error_from_response(response);
  if (response.content_type != "application/json") return json(response.body);
  return json::parse(response.body);
}

std::string Client::call_text(const std::string& method, const std::string& path) {
  const auto response = send(ApiRequest{method, path, {}, {}});
  if (response.status < 200 || response.status >= 300) throw error_from_response(response);
  return response.body;
}

struct HttpClient::Impl {
  Impl(const std::string& host, int port) : client(host, port) {}
  httplib::Client client;
};

HttpClient::HttpClient(std::string host, int port) : impl_(std::make_unique<Impl>(host, port)) {
  impl_->client.set_connection_timeout(5);
  impl_->client.set_read_timeout(60);
}

HttpClient::~HttpClient() = default;

ApiResponse HttpClient::send(const ApiRequest& request) {
  httplib::Params params(request.query.begin(), request.query.end());
  const std::string path = std::string(kApiPrefix) + request.path;
  const httplib::Headers headers;
  httplib::Result result;
  if (request.method == "GET") {
    result = impl_->client.Get(path, params, headers);
  } else if (request.method == "POST") {
    result = impl_->client.Post(httplib::append_query_params(path, params), request.body, "application/json");
  } else if (request.method == "DELETE") {
    result = impl_->client.Delete(httplib::append_query_params(path, params));
  } else {
    throw std::invalid_argument("unsupported method " + request.method);
  }
  if (!result) throw std::runtime_error("gateway unreachable: " + httplib::to_string(result.error()));
  auto content_type = result->get_header_value("Content-Type");
  if (const auto semi = content_type.find(';'); semi != std::string::npos) content_type.resize(semi);
  return ApiResponse{result->status, result->body, content_type};
}

}  // namespace worldgrid::gateway
