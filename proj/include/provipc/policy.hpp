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

// Stack-inspection evaluation over call chains. A request is allowed only if
// every principal it passed through holds the permission, so a privileged
// deputy cannot lend its rights to an unprivileged caller upstream.

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>

#include "provipc/types.hpp"

namespace provipc {

class Authority;

class PermissionTable {
 public:
  void grant(std::uint32_t uid, const PermissionSet& permissions);
  // Unknown uids hold nothing.
  bool holds(std::uint32_t uid, const PermissionToken& permission) const;

 private:
  std::map<std::uint32_t, PermissionSet> grants_;
};

enum class DenyReason : std::uint8_t {
  kNone,
  kNoPrincipal,        // empty chain: nobody vouches for the request
  kUnprivilegedLink,   // `index` names the most recent offending link
  kMissingStatement,   // `index` names the required speaker, in set order
};

struct Decision {
  bool allowed = false;
  DenyReason reason = DenyReason::kNone;
  std::size_t index = 0;

  static Decision allow() { return {true, DenyReason::kNone, 0}; }
  static Decision deny(DenyReason reason, std::size_t index = 0) {
    return {false, reason, index};
  }

  bool operator==(const Decision&) const = default;
};

std::string to_string(const Decision& d);

Decision evaluate(const CallChain& chain, const PermissionToken& permission,
                  const PermissionTable& table);

/// evaluate(), and additionally every principal in `required_speakers` must
/// have at least one statement in `statements` that the authority accepts.
Decision evaluate_with_statements(const CallChain& chain,
                                  const PermissionToken& permission,
                                  const PermissionTable& table,
                                  std::span<const Statement> statements,
                                  const std::set<Principal>& required_speakers,
                                  const Authority& authority);

}  // namespace provipc
