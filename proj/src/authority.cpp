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
#include "provipc/authority.hpp"

#include <mutex>

#include "provipc/encoding.hpp"
#include "provipc/error.hpp"
#include "provipc/policy.hpp"

namespace provipc {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kValid: return "Valid";
    case Verdict::kInvalidTag: return "InvalidTag";
    case Verdict::kUnknownSpeaker: return "UnknownSpeaker";
  }
  return "Unknown";
}

void Authority::admit(const Principal& principal, const AppIdentity& identity) {
  std::unique_lock lock(mu_);
  live_.insert(principal);
  directory_.insert_or_assign(principal.uid, identity);
}

void Authority::retire(const Principal& principal) {
  std::unique_lock lock(mu_);
  live_.erase(principal);
  keys_.erase(principal);
  directory_.erase(principal.uid);
}

SecretKey Authority::register_key(const Principal& principal) {
  SecretKey fresh = keygen(algorithm_);
  std::unique_lock lock(mu_);
  if (!live_.contains(principal)) {
    throw Error(ErrorCode::kUnknownPrincipal,
                to_string(principal) + " is not a live process");
  }
  keys_.insert_or_assign(principal, fresh);
  return fresh;
}

Verdict Authority::verify_statement(const Statement& statement) const {
  Bytes signed_bytes =
      statement_signing_bytes(statement.speaker, statement.message);
  std::shared_lock lock(mu_);
  auto it = keys_.find(statement.speaker);
  if (it == keys_.end()) return Verdict::kUnknownSpeaker;
  if (statement.tag.bytes.size() != tag_length(algorithm_)) {
    return Verdict::kInvalidTag;
  }
  return mac_verify(it->second, signed_bytes, statement.tag)
             ? Verdict::kValid
             : Verdict::kInvalidTag;
}

ResolvedChain Authority::resolve_chain(const CallChain& chain) const {
  ResolvedChain out;
  out.names.reserve(chain.size());
  std::shared_lock lock(mu_);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    auto it = directory_.find(chain[i].uid);
    if (it == directory_.end()) {
      throw Error(ErrorCode::kUnresolvablePrincipal,
                  "no directory entry for " + to_string(chain[i]), i);
    }
    out.names.push_back(it->second.app_name);
  }
  return out;
}

std::optional<AppIdentity> Authority::identity(std::uint32_t uid) const {
  std::shared_lock lock(mu_);
  auto it = directory_.find(uid);
  if (it == directory_.end()) return std::nullopt;
  return it->second;
}

PermissionTable Authority::permission_table() const {
  PermissionTable table;
  std::shared_lock lock(mu_);
  for (const auto& [uid, identity] : directory_) {
    table.grant(uid, identity.permissions);
  }
  return table;
}

}  // namespace provipc
