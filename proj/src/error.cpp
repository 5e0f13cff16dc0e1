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
#include "provipc/error.hpp"

namespace provipc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEncodingOverflow: return "EncodingOverflow";
    case ErrorCode::kMalformedEncoding: return "MalformedEncoding";
    case ErrorCode::kPayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::kChainDepthExceeded: return "ChainDepthExceeded";
    case ErrorCode::kRngUnavailable: return "RngUnavailable";
    case ErrorCode::kTagLengthMismatch: return "TagLengthMismatch";
    case ErrorCode::kAlgorithmMismatch: return "AlgorithmMismatch";
    case ErrorCode::kUnknownPrincipal: return "UnknownPrincipal";
    case ErrorCode::kUnresolvablePrincipal: return "UnresolvablePrincipal";
    case ErrorCode::kDuplicateApp: return "DuplicateApp";
    case ErrorCode::kInvalidAppName: return "InvalidAppName";
    case ErrorCode::kUnknownTarget: return "UnknownTarget";
    case ErrorCode::kTargetDead: return "TargetDead";
    case ErrorCode::kReentrantCall: return "ReentrantCall";
    case ErrorCode::kStatementVerificationFailed:
      return "StatementVerificationFailed";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kBindFailure: return "BindFailure";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what,
             std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      index_(index) {}

}  // namespace provipc
