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

#include <array>
#include <cstddef>
#include <string_view>

#include "provipc/types.hpp"

namespace provipc {

inline constexpr std::size_t kSecretKeyLength = 32;

std::size_t tag_length(MacAlgorithm algorithm);
std::string_view to_string(MacAlgorithm algorithm);
/// Accepts "hmac-sha1" and "hmac-sha256"; throws kConfigError otherwise.
MacAlgorithm parse_mac_algorithm(std::string_view name);

/// A 32-byte MAC key bound to one algorithm. Deliberately has no stream
/// operator or encoder overload.
class SecretKey {
 public:
  using Material = std::array<std::uint8_t, kSecretKeyLength>;

  SecretKey(MacAlgorithm algorithm, const Material& material)
      : algorithm_(algorithm), material_(material) {}
  ~SecretKey();
  SecretKey(const SecretKey&) = default;
  SecretKey& operator=(const SecretKey&) = default;

  /// Throws kConfigError unless `material` is exactly 32 bytes.
  static SecretKey from_bytes(MacAlgorithm algorithm, ByteView material);

  MacAlgorithm algorithm() const noexcept { return algorithm_; }
  ByteView material() const noexcept { return material_; }

  // Constant-time.
  bool operator==(const SecretKey& other) const noexcept;

 private:
  MacAlgorithm algorithm_;
  Material material_;
};

/// 32 bytes from the OS CSPRNG. Throws kRngUnavailable if it fails.
SecretKey keygen(MacAlgorithm algorithm);

/// Raw HMAC with an arbitrary-length key.
AuthTag hmac(MacAlgorithm algorithm, ByteView key, ByteView data);

AuthTag mac_create(const SecretKey& key, ByteView data);

/// Recomputes and compares in constant time. Throws kTagLengthMismatch if
/// the tag length does not match the key's algorithm.
bool mac_verify(const SecretKey& key, ByteView data, const AuthTag& tag);

}  // namespace provipc
