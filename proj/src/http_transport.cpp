// Copyright 2026 The provipc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "provipc/http_transport.hpp"

#include "httplib.h"
#include "provipc/encoding.hpp"
#include "provipc/error.hpp"

namespace provipc {
namespace {

constexpr const char* kOctets = "application/octet-stream";

RpcResponse to_response(const httplib::Result& res) {
  if (!res) {
    throw Error(ErrorCode::kTransportError,
                "http: " + httplib::to_string(res.error()));
  }
  return RpcResponse{static_cast<std::uint32_t>(res->status),
                     Bytes(res->body.begin(), res->body.end())};
}

void reply(httplib::Response& res, const RpcResponse& r) {
  res.status = static_cast<int>(r.status);
  res.set_content(std::string(r.body.begin(), r.body.end()), kOctets);
}

}  // namespace

HttpTransport::HttpTransport(std::string host, int port)
    : client_(std::make_unique<httplib::Client>(std::move(host), port)) {
  client_->set_connection_timeout(5);
  client_->set_read_timeout(10);
}

HttpTransport::~HttpTransport() = default;

RpcResponse HttpTransport::send(const WireRequest& wire) {
  httplib::Headers headers{
      {std::string(kDeviceIdHeader), wire.device_id},
      {std::string(kUrlHeader), wire.url},
      {std::string(kEvidenceHeader), to_hex(wire.evidence.bytes)},
  };
  for (const auto& [name, value] : wire.headers) headers.emplace(name, value);
  return to_response(client_->Post(
      "/rpc", headers,
      std::string(wire.payload.begin(), wire.payload.end()), kOctets));
}

RpcResponse HttpTransport::send_plain(std::string_view url, ByteView payload) {
  httplib::Headers headers{{std::string(kUrlHeader), std::string(url)}};
  return to_response(client_->Post(
      "/plain", headers, std::string(payload.begin(), payload.end()),
      kOctets));
}

VerifierHttpServer::VerifierHttpServer(std::shared_ptr<RemoteServer> server,
                                       LogSink sink)
    : server_(std::move(server)),
      sink_(std::move(sink)),
      http_(std::make_unique<httplib::Server>()) {
  if (sink_) server_->set_log_sink(sink_);
  http_->Post("/rpc", [this](const httplib::Request& req,
                             httplib::Response& res) {
    WireRequest wire;
    wire.device_id = req.get_header_value(std::string(kDeviceIdHeader));
    wire.url = req.get_header_value(std::string(kUrlHeader));
    wire.payload.assign(req.body.begin(), req.body.end());
    // Only one value per provenance header; a repeated header is malformed.
    for (std::string_view name : {kChainHeader, kStatementsHeader}) {
      std::string key(name);
      auto n = req.get_header_value_count(key);
      for (std::size_t i = 0; i < n; ++i) {
        wire.headers.emplace_back(key, req.get_header_value(key, i));
      }
    }
    RpcResponse r;
    try {
      wire.evidence.bytes =
          from_hex(req.get_header_value(std::string(kEvidenceHeader)));
      r = server_->handle(wire);
    } catch (const Error&) {
      r = server_->handle_frame({});  // logs REJECT MalformedHeader
    }
    reply(res, r);
  });
  http_->Post("/plain", [this](const httplib::Request& req,
                               httplib::Response& res) {
    reply(res, RpcResponse{200, Bytes(req.body.begin(), req.body.end())});
  });
}

VerifierHttpServer::~VerifierHttpServer() { stop(); }

int VerifierHttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = http_->bind_to_any_port(host);
    if (bound < 0) bound = -1;
  } else if (!http_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    throw Error(ErrorCode::kBindFailure,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return bound;
}

void VerifierHttpServer::wait() {
  if (thread_.joinable()) thread_.join();
}

void VerifierHttpServer::stop() {
  http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace provipc
