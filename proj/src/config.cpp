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
#include "provipc/config.hpp"

#include <charconv>
#include <fstream>

#include "provipc/crypto.hpp"
#include "provipc/error.hpp"

namespace provipc {
namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || end != value.data() + value.size()) {
    throw Error(ErrorCode::kConfigError,
                std::string(key) + ": not an unsigned integer: '" +
                    std::string(value) + "'");
  }
  return v;
}

}  // namespace

void Config::set(std::string_view key, std::string_view value) {
  if (key == "mac_algorithm") {
    mac_algorithm = parse_mac_algorithm(value);
  } else if (key == "freshness_ms") {
    freshness_ms = parse_u64(key, value);
  } else if (key == "max_chain_depth") {
    max_chain_depth = parse_u64(key, value);
    if (max_chain_depth == 0) throw Error(ErrorCode::kConfigError, "max_chain_depth must be > 0");
  } else if (key == "max_payload") {
    max_payload = parse_u64(key, value);
  } else if (key == "transport") {
    transport = parse_transport(value);
  } else if (key == "seed") {
    seed = parse_u64(key, value);
  } else {
    throw Error(ErrorCode::kConfigError, "unknown key '" + std::string(key) + "'");
  }
}

ScenarioOptions Config::scenario_options() const {
  ScenarioOptions o;
  o.bus.algorithm = mac_algorithm;
  o.bus.max_chain_depth = max_chain_depth;
  o.bus.max_payload = max_payload;
  o.transport = transport;
  o.freshness_ms = freshness_ms;
  o.seed = seed;
  return o;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot read config " + path);
  Config config;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    std::string_view l = line;
    l = trim(l.substr(0, l.find('#')));
    if (l.empty()) continue;
    auto eq = l.find('=');
    try {
      if (eq == std::string_view::npos) {
        throw Error(ErrorCode::kConfigError, "expected key=value");
      }
      config.set(trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
    } catch (const Error& e) {
      std::string why = e.what();
      std::string prefix = std::string(to_string(e.code())) + ": ";
      if (why.starts_with(prefix)) why.erase(0, prefix.size());
      throw Error(ErrorCode::kConfigError,
                  path + ":" + std::to_string(lineno) + ": " + why);
    }
  }
  return config;
}

}  // namespace provipc
