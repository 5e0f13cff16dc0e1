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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string_view>

#include "provipc/crypto.hpp"
#include "provipc/types.hpp"

namespace provipc {

enum class Verdict : std::uint8_t { kValid, kInvalidTag, kUnknownSpeaker };

std::string_view to_string(Verdict v);

class PermissionTable;

// The trusted authority manager. Holds one MAC key per live principal,
// verifies statements on behalf of anyone, and maps uids to app identities.
//
// The bus admits and retires principals as processes come and go; apps
// reach the rest of this interface only through the bus.
//
// All members are safe to call concurrently. A verification never observes
// a half-replaced key.
class Authority {
 public:
  explicit Authority(MacAlgorithm algorithm) : algorithm_(algorithm) {}

  Authority(const Authority&) = delete;
  Authority& operator=(const Authority&) = delete;

  MacAlgorithm algorithm() const noexcept { return algorithm_; }

  // Records a live process and its directory entry.
  void admit(const Principal& principal, const AppIdentity& identity);
  // Drops the process's key and directory entry. Statements it made become
  // kUnknownSpeaker.
  void retire(const Principal& principal);

  /// Issues a fresh key for `principal`, replacing (and invalidating) any
  /// earlier one. Throws kUnknownPrincipal for processes never admitted.
  SecretKey register_key(const Principal& principal);

  Verdict verify_statement(const Statement& statement) const;

  /// Names in chain order. Throws kUnresolvablePrincipal carrying the
  /// index of the first link without a directory entry.
  ResolvedChain resolve_chain(const CallChain& chain) const;

  std::optional<AppIdentity> identity(std::uint32_t uid) const;
  PermissionTable permission_table() const;

 private:
  const MacAlgorithm algorithm_;
  mutable std::shared_mutex mu_;
  std::set<Principal> live_;
  std::map<Principal, SecretKey> keys_;
  std::map<std::uint32_t, AppIdentity> directory_;
};

}  // namespace provipc
