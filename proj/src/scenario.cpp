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
#include "provipc/scenario.hpp"

#include "provipc/error.hpp"

namespace provipc {

TransportKind parse_transport(std::string_view name) {
  if (name == "memory") return TransportKind::kMemory;
  if (name == "http") return TransportKind::kHttp;
  throw Error(ErrorCode::kConfigError,
              "unknown transport '" + std::string(name) + "'");
}

std::string_view to_string(TransportKind kind) {
  return kind == TransportKind::kMemory ? "memory" : "http";
}

std::string Transcript::render() const {
  std::string out;
  for (const auto& line : lines) out += line + "\n";
  out += "frames sent: " + std::to_string(frames_sent) + "\n";
  for (const auto& line : server_log) out += "server: " + line + "\n";
  out += expected ? "outcome: as expected\n" : "outcome: UNEXPECTED\n";
  return out;
}

ScenarioNetwork::ScenarioNetwork(const ScenarioOptions& options,
                                 RemoteServer::AppHandler app)
    : bus_(options.bus) {
  auto device = DeviceCredential::manufacture("phone-" + std::to_string(options.seed),
                                              options.bus.algorithm);
  TrustStore trust;
  trust.endorse(device);
  server_ = std::make_shared<RemoteServer>(
      std::move(trust), [this, app = std::move(app)](const ServerView& view) {
        {
          std::lock_guard lock(views_mu_);
          views_.push_back(view);
        }
        return app ? app(view) : RpcResponse{200, {}};
      });
  std::shared_ptr<Transport> transport;
  if (options.transport == TransportKind::kHttp) {
    http_ = std::make_unique<VerifierHttpServer>(server_);
    int port = http_->start("127.0.0.1", 0);
    transport = std::make_shared<HttpTransport>("127.0.0.1", port);
  } else {
    transport = std::make_shared<InMemoryTransport>(server_);
  }
  provider_ = std::make_unique<NetworkProvider>(bus_, std::move(device),
                                                std::move(transport));
}

ScenarioNetwork::~ScenarioNetwork() {
  provider_.reset();
  if (http_) http_->stop();
}

void ScenarioNetwork::collect(Transcript& t) const {
  t.server_log = server_->log();
  t.frames_sent = t.server_log.size();
  std::lock_guard lock(views_mu_);
  t.server_views = views_;
}

}  // namespace provipc
