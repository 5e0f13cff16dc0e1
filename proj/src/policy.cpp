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
#include "provipc/policy.hpp"

#include "provipc/authority.hpp"

namespace provipc {

void PermissionTable::grant(std::uint32_t uid,
                            const PermissionSet& permissions) {
  grants_[uid].insert(permissions.begin(), permissions.end());
}

bool PermissionTable::holds(std::uint32_t uid,
                            const PermissionToken& permission) const {
  auto it = grants_.find(uid);
  return it != grants_.end() && it->second.contains(permission);
}

std::string to_string(const Decision& d) {
  switch (d.reason) {
    case DenyReason::kNone: return "Allow";
    case DenyReason::kNoPrincipal: return "Deny(no-principal)";
    case DenyReason::kUnprivilegedLink:
      return "Deny(" + std::to_string(d.index) + ")";
    case DenyReason::kMissingStatement:
      return "Deny(missing-statement " + std::to_string(d.index) + ")";
  }
  return "Deny";
}

Decision evaluate(const CallChain& chain, const PermissionToken& permission,
                  const PermissionTable& table) {
  if (chain.empty()) return Decision::deny(DenyReason::kNoPrincipal);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (!table.holds(chain[i].uid, permission)) {
      return Decision::deny(DenyReason::kUnprivilegedLink, i);
    }
  }
  return Decision::allow();
}

Decision evaluate_with_statements(const CallChain& chain,
                                  const PermissionToken& permission,
                                  const PermissionTable& table,
                                  std::span<const Statement> statements,
                                  const std::set<Principal>& required_speakers,
                                  const Authority& authority) {
  Decision base = evaluate(chain, permission, table);
  if (!base.allowed) return base;
  std::size_t index = 0;
  for (const Principal& speaker : required_speakers) {
    bool vouched = false;
    for (const Statement& s : statements) {
      if (s.speaker == speaker &&
          authority.verify_statement(s) == Verdict::kValid) {
        vouched = true;
        break;
      }
    }
    if (!vouched) return Decision::deny(DenyReason::kMissingStatement, index);
    ++index;
  }
  return Decision::allow();
}

}  // namespace provipc
