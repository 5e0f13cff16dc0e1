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
#include "provipc/types.hpp"

#include <utility>

#include "provipc/error.hpp"

namespace provipc {

std::string to_string(const Principal& p) {
  return "(" + std::to_string(p.uid) + "," + std::to_string(p.pid) + ")";
}

PermissionToken::PermissionToken(std::string name) : name_(std::move(name)) {
  if (name_.empty()) {
    throw std::invalid_argument("permission token must be non-empty");
  }
}

PermissionSet make_permissions(std::initializer_list<const char*> names) {
  PermissionSet out;
  for (const char* n : names) out.emplace(n);
  return out;
}

CallChain::CallChain(std::initializer_list<Principal> links) : links_(links) {}

CallChain::CallChain(const std::vector<Principal>& links)
    : links_(links.begin(), links.end()) {}

CallChain chain_prepend(const CallChain& chain, const Principal& caller,
                        std::size_t max_depth) {
  if (chain.size() >= max_depth) {
    throw Error(ErrorCode::kChainDepthExceeded,
                "chain already holds " + std::to_string(chain.size()) +
                    " links (max " + std::to_string(max_depth) + ")");
  }
  CallChain::Storage links;
  links.reserve(chain.size() + 1);
  links.push_back(caller);
  links.insert(links.end(), chain.begin(), chain.end());
  return CallChain(std::move(links));
}

std::string to_string(const CallChain& chain) {
  std::string out = "[";
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) out += ", ";
    out += to_string(chain[i]);
  }
  return out + "]";
}

}  // namespace provipc
