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

// Shared plumbing for the end-to-end scenarios: options, a manual clock,
// transcripts, and a bus + provider + test server rig.

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "provipc/http_transport.hpp"
#include "provipc/ipc_bus.hpp"
#include "provipc/net_provider.hpp"

namespace provipc {

enum class TransportKind : std::uint8_t { kMemory, kHttp };

TransportKind parse_transport(std::string_view name);  // kConfigError
std::string_view to_string(TransportKind kind);

struct ScenarioOptions {
  BusConfig bus;
  TransportKind transport = TransportKind::kMemory;
  std::uint64_t freshness_ms = 500;
  std::uint64_t seed = 1;
};

class ManualClock {
 public:
  explicit ManualClock(std::uint64_t start_ms = 0) : now_ms_(start_ms) {}
  std::uint64_t now_ms() const noexcept { return now_ms_; }
  void advance(std::uint64_t ms) noexcept { now_ms_ += ms; }

 private:
  std::uint64_t now_ms_;
};

struct Transcript {
  std::vector<std::string> lines;
  // Attested requests that reached the server, and what it made of them.
  std::size_t frames_sent = 0;
  std::vector<std::string> server_log;
  std::vector<ServerView> server_views;
  // Whether the run ended the way its parameters say it should.
  bool expected = false;

  void note(std::string line) { lines.push_back(std::move(line)); }
  std::string render() const;
};

// Bus, device credential, test server, transport and provider, wired up.
class ScenarioNetwork {
 public:
  ScenarioNetwork(const ScenarioOptions& options, RemoteServer::AppHandler app);
  ~ScenarioNetwork();

  Bus& bus() { return bus_; }
  const std::string& device_id() const { return provider_->device_id(); }
  // Copies server-side state into `t`.
  void collect(Transcript& t) const;

 private:
  Bus bus_;
  std::shared_ptr<RemoteServer> server_;
  std::unique_ptr<VerifierHttpServer> http_;
  std::unique_ptr<NetworkProvider> provider_;
  mutable std::mutex views_mu_;
  std::vector<ServerView> views_;
};

}  // namespace provipc
