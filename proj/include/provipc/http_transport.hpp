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
#pragma once

// HTTP transport for attested requests. Plain HTTP: the channel evidence is
// the provider's MAC, carried in a header. No TLS.
//
//   POST /rpc    body = payload
//                X-Device-Id, X-Provenance-Url, X-Provenance-Chain,
//                X-Provenance-Statements, X-Provenance-Evidence (hex)
//   POST /plain  body = payload, X-Provenance-Url
//
// The response status and body are the RemoteServer's verbatim.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <thread>

#include "provipc/net_provider.hpp"

namespace httplib {
class Client;
class Server;
}  // namespace httplib

namespace provipc {

inline constexpr std::string_view kDeviceIdHeader = "X-Device-Id";
inline constexpr std::string_view kUrlHeader = "X-Provenance-Url";
inline constexpr std::string_view kEvidenceHeader = "X-Provenance-Evidence";

class HttpTransport : public Transport {
 public:
  HttpTransport(std::string host, int port);
  ~HttpTransport() override;

  RpcResponse send(const WireRequest& wire) override;
  RpcResponse send_plain(std::string_view url, ByteView payload) override;

 private:
  std::unique_ptr<httplib::Client> client_;
};

class VerifierHttpServer {
 public:
  using LogSink = std::function<void(const std::string& line)>;

  VerifierHttpServer(std::shared_ptr<RemoteServer> server, LogSink sink = {});
  ~VerifierHttpServer();

  VerifierHttpServer(const VerifierHttpServer&) = delete;
  VerifierHttpServer& operator=(const VerifierHttpServer&) = delete;

  /// Binds `host:port` (port 0 picks a free one) and serves on a background
  /// thread. Throws kBindFailure. Returns the bound port.
  int start(const std::string& host, int port);
  /// Blocks until stop() is called from elsewhere.
  void wait();
  void stop();

 private:
  std::shared_ptr<RemoteServer> server_;
  LogSink sink_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
};

}  // namespace provipc
