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

// key=value configuration. Blank lines and '#' comments are ignored.
//
//   mac_algorithm   = hmac-sha1 | hmac-sha256
//   freshness_ms    = 500
//   max_chain_depth = 64
//   max_payload     = 1048576
//   transport       = memory | http
//   seed            = 1

#include <string>

#include "provipc/scenario.hpp"

namespace provipc {

struct Config {
  MacAlgorithm mac_algorithm = MacAlgorithm::kHmacSha1;
  std::uint64_t freshness_ms = 500;
  std::size_t max_chain_depth = kDefaultMaxChainDepth;
  std::size_t max_payload = kDefaultMaxPayload;
  TransportKind transport = TransportKind::kMemory;
  std::uint64_t seed = 1;

  /// Applies one key; throws kConfigError for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  ScenarioOptions scenario_options() const;
};

/// Throws kConfigError naming the file and line.
Config load_config(const std::string& path);

}  // namespace provipc
