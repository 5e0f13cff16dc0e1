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
#include "provipc/encoding.hpp"

#include <limits>

#include "provipc/error.hpp"

namespace provipc {

Encoder& Encoder::reserve(std::size_t n) {
  out_.reserve(out_.size() + n);
  return *this;
}

Encoder& Encoder::u8(std::uint8_t v) {
  out_.push_back(v);
  return *this;
}

Encoder& Encoder::u32(std::uint32_t v) {
  const std::uint8_t be[4] = {
      static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
      static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
  out_.insert(out_.end(), be, be + 4);
  return *this;
}

Encoder& Encoder::u64(std::uint64_t v) {
  u32(static_cast<std::uint32_t>(v >> 32));
  return u32(static_cast<std::uint32_t>(v));
}

Encoder& Encoder::count(std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kEncodingOverflow,
                "length " + std::to_string(n) + " does not fit in 32 bits");
  }
  return u32(static_cast<std::uint32_t>(n));
}

Encoder& Encoder::raw(ByteView v) {
  out_.insert(out_.end(), v.begin(), v.end());
  return *this;
}

Encoder& Encoder::bytes(ByteView v) { return count(v.size()).raw(v); }

Encoder& Encoder::str(std::string_view v) { return bytes(as_bytes(v)); }

Encoder& Encoder::principal(const Principal& p) {
  const std::uint8_t be[8] = {
      static_cast<std::uint8_t>(p.uid >> 24), static_cast<std::uint8_t>(p.uid >> 16),
      static_cast<std::uint8_t>(p.uid >> 8),  static_cast<std::uint8_t>(p.uid),
      static_cast<std::uint8_t>(p.pid >> 24), static_cast<std::uint8_t>(p.pid >> 16),
      static_cast<std::uint8_t>(p.pid >> 8),  static_cast<std::uint8_t>(p.pid)};
  out_.insert(out_.end(), be, be + 8);
  return *this;
}

Encoder& Encoder::message(const Message& m) {
  return str(m.method).bytes(m.payload).u64(m.timestamp_ms);
}

Encoder& Encoder::statement(const Statement& s) {
  return principal(s.speaker).message(s.message).bytes(s.tag.bytes);
}

Encoder& Encoder::chain(const CallChain& c) {
  count(c.size());
  for (const auto& p : c) principal(p);
  return *this;
}

Encoder& Encoder::resolved(const ResolvedChain& r) {
  count(r.names.size());
  for (const auto& n : r.names) str(n);
  return *this;
}

ByteView Decoder::take(std::size_t n) {
  if (n > remaining()) {
    throw Error(ErrorCode::kMalformedEncoding,
                "need " + std::to_string(n) + " bytes at offset " +
                    std::to_string(pos_) + ", have " +
                    std::to_string(remaining()));
  }
  ByteView out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t Decoder::u8() { return take(1)[0]; }

std::uint32_t Decoder::u32() {
  std::uint32_t v = 0;
  for (std::uint8_t b : take(4)) v = (v << 8) | b;
  return v;
}

std::uint64_t Decoder::u64() {
  std::uint64_t v = 0;
  for (std::uint8_t b : take(8)) v = (v << 8) | b;
  return v;
}

Bytes Decoder::bytes() {
  ByteView v = take(u32());
  return Bytes(v.begin(), v.end());
}

std::string Decoder::str() {
  ByteView v = take(u32());
  return std::string(v.begin(), v.end());
}

std::size_t Decoder::count() {
  std::size_t n = u32();
  // Each element occupies at least one byte; reject absurd counts before
  // anything is reserved for them.
  if (n > remaining()) {
    throw Error(ErrorCode::kMalformedEncoding,
                "element count " + std::to_string(n) + " exceeds input");
  }
  return n;
}

Principal Decoder::principal() {
  Principal p;
  p.uid = u32();
  p.pid = u32();
  return p;
}

Message Decoder::message() {
  Message m;
  m.method = str();
  m.payload = bytes();
  m.timestamp_ms = u64();
  return m;
}

Statement Decoder::statement() {
  Statement s;
  s.speaker = principal();
  s.message = message();
  s.tag.bytes = bytes();
  return s;
}

CallChain Decoder::chain() {
  std::size_t n = count();
  CallChain::Storage links;
  links.reserve(n);
  for (std::size_t i = 0; i < n; ++i) links.push_back(principal());
  return CallChain(std::move(links));
}

ResolvedChain Decoder::resolved() {
  std::size_t n = count();
  ResolvedChain r;
  r.names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) r.names.push_back(str());
  return r;
}

void Decoder::expect_end() const {
  if (remaining() != 0) {
    throw Error(ErrorCode::kMalformedEncoding,
                std::to_string(remaining()) + " trailing bytes");
  }
}

Bytes canonical_encode(const Principal& p) {
  return Encoder().principal(p).take();
}
Bytes canonical_encode(const Message& m) { return Encoder().message(m).take(); }
Bytes canonical_encode(const Statement& s) {
  return Encoder().statement(s).take();
}
Bytes canonical_encode(const CallChain& c) { return Encoder().chain(c).take(); }
Bytes canonical_encode(const ResolvedChain& r) {
  return Encoder().resolved(r).take();
}

Bytes statement_signing_bytes(const Principal& speaker, const Message& m) {
  return Encoder().principal(speaker).message(m).take();
}

namespace {

template <typename T, typename Fn>
T decode_all(ByteView in, Fn fn) {
  Decoder d(in);
  T out = fn(d);
  d.expect_end();
  return out;
}

}  // namespace

template <>
Principal canonical_decode<Principal>(ByteView in) {
  return decode_all<Principal>(in, [](Decoder& d) { return d.principal(); });
}
template <>
Message canonical_decode<Message>(ByteView in) {
  return decode_all<Message>(in, [](Decoder& d) { return d.message(); });
}
template <>
Statement canonical_decode<Statement>(ByteView in) {
  return decode_all<Statement>(in, [](Decoder& d) { return d.statement(); });
}
template <>
CallChain canonical_decode<CallChain>(ByteView in) {
  return decode_all<CallChain>(in, [](Decoder& d) { return d.chain(); });
}
template <>
ResolvedChain canonical_decode<ResolvedChain>(ByteView in) {
  return decode_all<ResolvedChain>(in, [](Decoder& d) { return d.resolved(); });
}

std::string to_hex(ByteView in) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(in.size() * 2);
  for (std::uint8_t b : in) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) {
    throw Error(ErrorCode::kMalformedEncoding, "odd-length hex string");
  }
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorCode::kMalformedEncoding, "non-hex character");
    }
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

}  // namespace provipc
