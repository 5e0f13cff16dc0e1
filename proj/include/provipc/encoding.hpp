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

// Canonical byte encoding. Every MAC and every wire frame is computed over
// these bytes, so the layout is frozen:
//
//   integers        big-endian, fixed width (u8, u32, u64)
//   string, bytes   u32 length, then the raw bytes (strings are UTF-8)
//   list            u32 element count, then each element
//   Principal       uid:u32 pid:u32
//   Message         method:string payload:bytes timestamp_ms:u64
//   Statement       speaker:Principal message:Message tag:bytes
//   CallChain       list<Principal>
//   ResolvedChain   list<string>

#include <cstdint>
#include <string>
#include <string_view>

#include "provipc/types.hpp"

namespace provipc {

class Encoder {
 public:
  // Capacity hint for `n` more bytes.
  Encoder& reserve(std::size_t n);
  Encoder& u8(std::uint8_t v);
  Encoder& u32(std::uint32_t v);
  Encoder& u64(std::uint64_t v);
  Encoder& bytes(ByteView v);
  Encoder& str(std::string_view v);
  Encoder& count(std::size_t n);
  // Appends without a length prefix.
  Encoder& raw(ByteView v);

  Encoder& principal(const Principal& p);
  Encoder& message(const Message& m);
  Encoder& statement(const Statement& s);
  Encoder& chain(const CallChain& c);
  Encoder& resolved(const ResolvedChain& r);

  const Bytes& data() const& noexcept { return out_; }
  Bytes take() noexcept { return std::move(out_); }

 private:
  Bytes out_;
};

/// Bounds-checked reader; any short read throws kMalformedEncoding.
class Decoder {
 public:
  explicit Decoder(ByteView in) : in_(in) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  Bytes bytes();
  std::string str();
  std::size_t count();

  Principal principal();
  Message message();
  Statement statement();
  CallChain chain();
  ResolvedChain resolved();

  std::size_t remaining() const noexcept { return in_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }
  void expect_end() const;

 private:
  ByteView take(std::size_t n);

  ByteView in_;
  std::size_t pos_ = 0;
};

Bytes canonical_encode(const Principal& p);
Bytes canonical_encode(const Message& m);
Bytes canonical_encode(const Statement& s);
Bytes canonical_encode(const CallChain& c);
Bytes canonical_encode(const ResolvedChain& r);

/// The bytes a statement's tag covers: speaker followed by message.
Bytes statement_signing_bytes(const Principal& speaker, const Message& m);

template <typename T>
T canonical_decode(ByteView in);

template <>
Principal canonical_decode<Principal>(ByteView in);
template <>
Message canonical_decode<Message>(ByteView in);
template <>
Statement canonical_decode<Statement>(ByteView in);
template <>
CallChain canonical_decode<CallChain>(ByteView in);
template <>
ResolvedChain canonical_decode<ResolvedChain>(ByteView in);

std::string to_hex(ByteView in);
/// Throws kMalformedEncoding on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace provipc
