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

// The network provider: the only component allowed to speak for the device
// to remote servers. It re-verifies every statement an app hands it,
// resolves the app's call chain into names, and sends the request with
// provenance headers over a channel authenticated by a device credential
// that no app can read.
//
// Wire format. A request is carried as a frame, in canonical encoding:
//
//   device_id:string url:string payload:bytes
//   headers:list<(name:string value:string)>
//   evidence:bytes
//
// `evidence` is the MAC, under the device's channel secret, of every byte
// before it. Exactly two headers are sent, in this order:
//
//   X-Provenance-Chain       app names joined with ',', originator first
//   X-Provenance-Statements  lowercase base16 of
//                            list<(app_name:string message:Message tag:bytes)>
//
// The HTTP transport carries the same fields as HTTP headers (see
// http_transport.hpp); the MAC is always computed over the frame layout.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "provipc/crypto.hpp"
#include "provipc/ipc_bus.hpp"
#include "provipc/types.hpp"

namespace provipc {

inline constexpr std::string_view kChainHeader = "X-Provenance-Chain";
inline constexpr std::string_view kStatementsHeader = "X-Provenance-Statements";

class TrustStore;

/// The device's channel credential. Only the network provider and the
/// trust-store enrollment path can reach the secret.
class DeviceCredential {
 public:
  static DeviceCredential manufacture(std::string device_id,
                                      MacAlgorithm algorithm);
  /// One line: `<device_id> <algorithm> <hex secret>`.
  static DeviceCredential load(const std::string& path);
  void save(const std::string& path) const;

  const std::string& device_id() const noexcept { return device_id_; }

 private:
  friend class NetworkProvider;
  friend class TrustStore;

  DeviceCredential(std::string device_id, SecretKey secret)
      : device_id_(std::move(device_id)), secret_(std::move(secret)) {}

  std::string device_id_;
  SecretKey secret_;
};

/// A statement the provider verified, restated with its speaker's name.
struct AttestedStatement {
  std::string speaker_name;
  Message message;
  AuthTag tag;

  bool operator==(const AttestedStatement&) const = default;
};

struct AttestedRequest {
  std::string device_id;
  std::string url;
  Bytes payload;
  // Originator first.
  ResolvedChain header_chain;
  std::vector<AttestedStatement> header_statements;
  AuthTag channel_evidence;
};

using HeaderList = std::vector<std::pair<std::string, std::string>>;

struct WireRequest {
  std::string device_id;
  std::string url;
  Bytes payload;
  HeaderList headers;
  AuthTag evidence;
};

std::string encode_chain_header(const ResolvedChain& chain);
std::string encode_statements_header(
    std::span<const AttestedStatement> statements);

WireRequest to_wire(const AttestedRequest& request);
/// The bytes `evidence` covers.
Bytes signed_body(const WireRequest& wire);
Bytes encode_frame(const WireRequest& wire);
/// Throws kMalformedEncoding.
WireRequest decode_frame(ByteView frame);

struct RpcResponse {
  std::uint32_t status = 0;
  Bytes body;

  bool operator==(const RpcResponse&) const = default;
};

class TrustStore {
 public:
  void endorse(const DeviceCredential& credential);
  void add(std::string device_id, SecretKey secret);
  const SecretKey* find(std::string_view device_id) const;
  bool empty() const noexcept { return devices_.empty(); }

  /// Lines of `<device_id> <algorithm> <hex secret>`; '#' starts a comment.
  /// Throws kConfigError on unreadable files or bad lines.
  static TrustStore load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::map<std::string, SecretKey, std::less<>> devices_;
};

enum class Rejection : std::uint8_t { kBadChannelAuth, kMalformedHeader };

std::string_view to_string(Rejection r);

/// What a remote server learns from an accepted request.
struct ServerView {
  std::string device_id;
  std::string url;
  Bytes payload;
  // Originator first.
  std::vector<std::string> chain;
  std::vector<AttestedStatement> statements;

  bool operator==(const ServerView&) const = default;
};

using VerifyResult = std::variant<ServerView, Rejection>;

/// Structure first (kMalformedHeader), then channel evidence
/// (kBadChannelAuth), then the provenance headers (kMalformedHeader).
VerifyResult server_verify(ByteView frame, const TrustStore& trust);
VerifyResult server_verify(const WireRequest& wire, const TrustStore& trust);
VerifyResult server_verify(const AttestedRequest& request,
                           const TrustStore& trust);

/// A remote service that accepts only attested requests.
class RemoteServer {
 public:
  using AppHandler = std::function<RpcResponse(const ServerView&)>;

  static constexpr std::uint32_t kStatusBadChannelAuth = 401;
  static constexpr std::uint32_t kStatusMalformed = 400;

  RemoteServer(TrustStore trust, AppHandler app);

  RpcResponse handle(const WireRequest& wire);
  RpcResponse handle_frame(ByteView frame);
  // Unattested baseline path; echoes the payload.
  RpcResponse handle_plain(ByteView frame);

  /// One line per attested request: "ACCEPT ..." or "REJECT ...".
  std::vector<std::string> log() const;
  /// Also receives each log line as it is written.
  void set_log_sink(std::function<void(const std::string&)> sink);

 private:
  RpcResponse dispatch(const VerifyResult& result);
  void append_log(std::string line);

  const TrustStore trust_;
  AppHandler app_;
  mutable std::mutex mu_;
  std::vector<std::string> log_;
  std::function<void(const std::string&)> sink_;
};

std::string describe(const ServerView& view);

class Transport {
 public:
  virtual ~Transport() = default;
  /// Throws kTransportError when the request cannot be delivered.
  virtual RpcResponse send(const WireRequest& wire) = 0;
  virtual RpcResponse send_plain(std::string_view url, ByteView payload) = 0;
};

/// Delivers canonical frames straight to a RemoteServer.
class InMemoryTransport : public Transport {
 public:
  using Tap = std::function<void(Bytes& frame)>;

  explicit InMemoryTransport(std::shared_ptr<RemoteServer> server)
      : server_(std::move(server)) {}

  RpcResponse send(const WireRequest& wire) override;
  RpcResponse send_plain(std::string_view url, ByteView payload) override;

  /// Lets tests modify frames in flight.
  void set_tap(Tap tap);
  std::size_t frames_sent() const;
  Bytes last_frame() const;

 private:
  std::shared_ptr<RemoteServer> server_;
  mutable std::mutex mu_;
  Tap tap_;
  std::size_t frames_ = 0;
  Bytes last_;
};

class NetworkProvider {
 public:
  static constexpr std::string_view kServiceName = "NetworkProvider";
  static constexpr std::uint32_t kServiceUid = 1001;

  /// Spawns the provider's system service on `bus`.
  NetworkProvider(Bus& bus, DeviceCredential credential,
                  std::shared_ptr<Transport> transport);
  ~NetworkProvider();

  NetworkProvider(const NetworkProvider&) = delete;
  NetworkProvider& operator=(const NetworkProvider&) = delete;

  const std::string& device_id() const noexcept {
    return credential_.device_id();
  }

  /// Verifies `statements` (kStatementVerificationFailed carrying the first
  /// bad index; nothing is sent), resolves the caller's effective chain and
  /// sends the attested request.
  RpcResponse rpc(const CallContext& ctx, std::string_view url,
                  ByteView payload, std::span<const Statement> statements);

  /// Builds the attested request without sending it.
  AttestedRequest attest(const CallContext& ctx, std::string_view url,
                         ByteView payload,
                         std::span<const Statement> statements) const;

 private:
  Reply serve(const CallContext& ctx, const Message& msg);

  Bus& bus_;
  const DeviceCredential credential_;
  std::shared_ptr<Transport> transport_;
};

// App side of the provider's bus endpoints.
namespace net_client {

inline constexpr std::string_view kRpc = "rpc";
inline constexpr std::string_view kRpcPlain = "rpc_plain";

RpcResponse rpc(Bus& bus, const ProcessHandle& from, std::string_view url,
                ByteView payload, std::vector<Statement> statements = {},
                ChainMode mode = ChainMode::kPropagate);
RpcResponse rpc_plain(Bus& bus, const ProcessHandle& from, std::string_view url,
                      ByteView payload);

}  // namespace net_client

}  // namespace provipc
