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
#include "provipc/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

#include <algorithm>

#include "provipc/error.hpp"

namespace provipc {
namespace {

const EVP_MD* digest_for(MacAlgorithm algorithm) {
  switch (algorithm) {
    case MacAlgorithm::kHmacSha1: return EVP_sha1();
    case MacAlgorithm::kHmacSha256: return EVP_sha256();
  }
  return nullptr;
}

}  // namespace

std::size_t tag_length(MacAlgorithm algorithm) {
  return algorithm == MacAlgorithm::kHmacSha1 ? 20 : 32;
}

std::string_view to_string(MacAlgorithm algorithm) {
  return algorithm == MacAlgorithm::kHmacSha1 ? "hmac-sha1" : "hmac-sha256";
}

MacAlgorithm parse_mac_algorithm(std::string_view name) {
  if (name == "hmac-sha1") return MacAlgorithm::kHmacSha1;
  if (name == "hmac-sha256") return MacAlgorithm::kHmacSha256;
  throw Error(ErrorCode::kConfigError,
              "unknown MAC algorithm '" + std::string(name) + "'");
}

SecretKey::~SecretKey() { OPENSSL_cleanse(material_.data(), material_.size()); }

SecretKey SecretKey::from_bytes(MacAlgorithm algorithm, ByteView material) {
  if (material.size() != kSecretKeyLength) {
    throw Error(ErrorCode::kConfigError,
                "secret key must be 32 bytes, got " +
                    std::to_string(material.size()));
  }
  Material m;
  std::copy(material.begin(), material.end(), m.begin());
  return SecretKey(algorithm, m);
}

bool SecretKey::operator==(const SecretKey& other) const noexcept {
  return algorithm_ == other.algorithm_ &&
         CRYPTO_memcmp(material_.data(), other.material_.data(),
                       material_.size()) == 0;
}

SecretKey keygen(MacAlgorithm algorithm) {
  SecretKey::Material m;
  if (RAND_bytes(m.data(), static_cast<int>(m.size())) != 1) {
    throw Error(ErrorCode::kRngUnavailable, "RAND_bytes failed");
  }
  SecretKey key(algorithm, m);
  OPENSSL_cleanse(m.data(), m.size());
  return key;
}

AuthTag hmac(MacAlgorithm algorithm, ByteView key, ByteView data) {
  AuthTag tag;
  tag.bytes.resize(EVP_MAX_MD_SIZE);
  unsigned int len = 0;
  // HMAC() never reads `data` when its length is zero, but it still wants a
  // non-null pointer on some OpenSSL builds.
  static const std::uint8_t kEmpty = 0;
  const std::uint8_t* in = data.empty() ? &kEmpty : data.data();
  if (HMAC(digest_for(algorithm), key.data(), static_cast<int>(key.size()), in,
           data.size(), tag.bytes.data(), &len) == nullptr) {
    throw std::runtime_error("HMAC computation failed");
  }
  tag.bytes.resize(len);
  return tag;
}

AuthTag mac_create(const SecretKey& key, ByteView data) {
  return hmac(key.algorithm(), key.material(), data);
}

bool mac_verify(const SecretKey& key, ByteView data, const AuthTag& tag) {
  if (tag.bytes.size() != tag_length(key.algorithm())) {
    throw Error(ErrorCode::kTagLengthMismatch,
                "expected " + std::to_string(tag_length(key.algorithm())) +
                    " tag bytes, got " + std::to_string(tag.bytes.size()));
  }
  AuthTag expected = mac_create(key, data);
  return CRYPTO_memcmp(expected.bytes.data(), tag.bytes.data(),
                       tag.bytes.size()) == 0;
}

}  // namespace provipc
