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

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace provipc {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline constexpr std::size_t kDefaultMaxPayload = std::size_t{1} << 20;
inline constexpr std::size_t kDefaultMaxChainDepth = 64;

/// Identity of one running app instance. Ordered by uid, then pid.
struct Principal {
  std::uint32_t uid = 0;
  std::uint32_t pid = 0;

  auto operator<=>(const Principal&) const = default;
};

std::string to_string(const Principal& p);

/// A named permission such as "FINE_LOCATION". Matching is exact and
/// case-sensitive.
class PermissionToken {
 public:
  explicit PermissionToken(std::string name);

  const std::string& name() const noexcept { return name_; }
  auto operator<=>(const PermissionToken&) const = default;

 private:
  std::string name_;
};

using PermissionSet = std::set<PermissionToken>;

PermissionSet make_permissions(std::initializer_list<const char*> names);

struct AppIdentity {
  std::string app_name;
  PermissionSet permissions;

  bool operator==(const AppIdentity&) const = default;
};

struct Message {
  std::string method;
  Bytes payload;
  std::uint64_t timestamp_ms = 0;

  bool operator==(const Message&) const = default;
};

enum class MacAlgorithm : std::uint8_t { kHmacSha1, kHmacSha256 };

struct AuthTag {
  Bytes bytes;

  bool operator==(const AuthTag&) const = default;
};

/// "speaker says message", bound by a MAC under the speaker's key.
struct Statement {
  Principal speaker;
  Message message;
  AuthTag tag;

  bool operator==(const Statement&) const = default;
};

/// Quoted provenance, most recent caller first: [B, A] reads
/// "B says A says ...".
class CallChain {
 public:
  // Chains this short never touch the heap.
  static constexpr std::size_t kInlineLinks = 8;
  using Storage = boost::container::small_vector<Principal, kInlineLinks>;

  CallChain() = default;
  CallChain(std::initializer_list<Principal> links);
  explicit CallChain(const std::vector<Principal>& links);
  explicit CallChain(Storage links) : links_(std::move(links)) {}

  std::span<const Principal> links() const noexcept {
    return {links_.data(), links_.size()};
  }
  std::size_t size() const noexcept { return links_.size(); }
  bool empty() const noexcept { return links_.empty(); }
  const Principal& operator[](std::size_t i) const { return links_[i]; }
  auto begin() const noexcept { return links_.begin(); }
  auto end() const noexcept { return links_.end(); }

  bool operator==(const CallChain& other) const {
    return links_ == other.links_;
  }

 private:
  Storage links_;
};

/// Returns [caller, ...chain]. Throws kChainDepthExceeded when `chain`
/// already holds `max_depth` links.
CallChain chain_prepend(const CallChain& chain, const Principal& caller,
                        std::size_t max_depth = kDefaultMaxChainDepth);

std::string to_string(const CallChain& chain);

struct ResolvedChain {
  std::vector<std::string> names;

  bool operator==(const ResolvedChain&) const = default;
};

}  // namespace provipc
