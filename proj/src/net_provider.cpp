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
#include "provipc/net_provider.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "provipc/encoding.hpp"
#include "provipc/error.hpp"

namespace provipc {
namespace {

struct KeyLine {
  std::string device_id;
  SecretKey secret;
};

// `<device_id> <algorithm> <hex secret>`
KeyLine parse_key_line(const std::string& line, const std::string& origin) {
  std::istringstream in(line);
  std::string id, alg, hex, extra;
  if (!(in >> id >> alg >> hex) || (in >> extra)) {
    throw Error(ErrorCode::kConfigError, origin + ": expected 3 fields");
  }
  try {
    return {id, SecretKey::from_bytes(parse_mac_algorithm(alg), from_hex(hex))};
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, origin + ": " + e.what());
  }
}

std::string key_line(const std::string& device_id, const SecretKey& secret) {
  return device_id + " " + std::string(to_string(secret.algorithm())) + " " +
         to_hex(secret.material());
}

std::vector<std::string> split_names(std::string_view value) {
  std::vector<std::string> out;
  if (value.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = value.find(',', start);
    std::string_view name = value.substr(
        start, comma == std::string_view::npos ? comma : comma - start);
    if (name.empty()) {
      throw Error(ErrorCode::kMalformedEncoding, "empty name in chain header");
    }
    out.emplace_back(name);
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

std::vector<AttestedStatement> decode_statements_header(std::string_view hex) {
  Bytes raw = from_hex(hex);
  Decoder dec(raw);
  std::size_t n = dec.count();
  std::vector<AttestedStatement> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    AttestedStatement s;
    s.speaker_name = dec.str();
    s.message = dec.message();
    s.tag.bytes = dec.bytes();
    out.push_back(std::move(s));
  }
  dec.expect_end();
  return out;
}

const std::string* find_header(const HeaderList& headers,
                               std::string_view name) {
  const std::string* found = nullptr;
  for (const auto& [k, v] : headers) {
    if (k == name) {
      if (found != nullptr) return nullptr;  // duplicates are malformed
      found = &v;
    }
  }
  return found;
}

Bytes encode_plain(std::string_view url, ByteView payload) {
  return Encoder().str(url).bytes(payload).take();
}

Bytes encode_response(const RpcResponse& r) {
  return Encoder().u32(r.status).bytes(r.body).take();
}

RpcResponse decode_response(ByteView in) {
  Decoder dec(in);
  RpcResponse r;
  r.status = dec.u32();
  r.body = dec.bytes();
  dec.expect_end();
  return r;
}

}  // namespace

DeviceCredential DeviceCredential::manufacture(std::string device_id,
                                               MacAlgorithm algorithm) {
  if (device_id.empty() ||
      device_id.find_first_of(" \t\r\n") != std::string::npos) {
    throw Error(ErrorCode::kConfigError,
                "device id must be non-empty without whitespace");
  }
  return DeviceCredential(std::move(device_id), keygen(algorithm));
}

DeviceCredential DeviceCredential::load(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line)) {
    throw Error(ErrorCode::kConfigError, "cannot read credential " + path);
  }
  KeyLine k = parse_key_line(line, path);
  return DeviceCredential(std::move(k.device_id), std::move(k.secret));
}

void DeviceCredential::save(const std::string& path) const {
  std::ofstream out(path);
  out << key_line(device_id_, secret_) << "\n";
  if (!out) throw Error(ErrorCode::kConfigError, "cannot write " + path);
}

std::string encode_chain_header(const ResolvedChain& chain) {
  std::string out;
  for (std::size_t i = 0; i < chain.names.size(); ++i) {
    if (i) out += ',';
    out += chain.names[i];
  }
  return out;
}

std::string encode_statements_header(
    std::span<const AttestedStatement> statements) {
  Encoder enc;
  enc.count(statements.size());
  for (const auto& s : statements) {
    enc.str(s.speaker_name).message(s.message).bytes(s.tag.bytes);
  }
  return to_hex(enc.data());
}

WireRequest to_wire(const AttestedRequest& request) {
  WireRequest wire;
  wire.device_id = request.device_id;
  wire.url = request.url;
  wire.payload = request.payload;
  wire.headers = {
      {std::string(kChainHeader), encode_chain_header(request.header_chain)},
      {std::string(kStatementsHeader),
       encode_statements_header(request.header_statements)},
  };
  wire.evidence = request.channel_evidence;
  return wire;
}

Bytes signed_body(const WireRequest& wire) {
  Encoder enc;
  enc.reserve(wire.payload.size() + 256)
      .str(wire.device_id)
      .str(wire.url)
      .bytes(wire.payload)
      .count(wire.headers.size());
  for (const auto& [name, value] : wire.headers) enc.str(name).str(value);
  return enc.take();
}

Bytes encode_frame(const WireRequest& wire) {
  Encoder enc;
  enc.raw(signed_body(wire)).bytes(wire.evidence.bytes);
  return enc.take();
}

WireRequest decode_frame(ByteView frame) {
  Decoder dec(frame);
  WireRequest wire;
  wire.device_id = dec.str();
  wire.url = dec.str();
  wire.payload = dec.bytes();
  std::size_t n = dec.count();
  for (std::size_t i = 0; i < n; ++i) {
    std::string name = dec.str();
    wire.headers.emplace_back(std::move(name), dec.str());
  }
  wire.evidence.bytes = dec.bytes();
  dec.expect_end();
  return wire;
}

void TrustStore::endorse(const DeviceCredential& credential) {
  add(credential.device_id_, credential.secret_);
}

void TrustStore::add(std::string device_id, SecretKey secret) {
  devices_.insert_or_assign(std::move(device_id), std::move(secret));
}

const SecretKey* TrustStore::find(std::string_view device_id) const {
  auto it = devices_.find(device_id);
  return it == devices_.end() ? nullptr : &it->second;
}

TrustStore TrustStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot read trust store " + path);
  TrustStore store;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    KeyLine k = parse_key_line(line, path + ":" + std::to_string(lineno));
    store.add(std::move(k.device_id), std::move(k.secret));
  }
  return store;
}

void TrustStore::save(const std::string& path) const {
  std::ofstream out(path);
  for (const auto& [id, secret] : devices_) out << key_line(id, secret) << "\n";
  if (!out) throw Error(ErrorCode::kConfigError, "cannot write " + path);
}

std::string_view to_string(Rejection r) {
  return r == Rejection::kBadChannelAuth ? "BadChannelAuth" : "MalformedHeader";
}

VerifyResult server_verify(const WireRequest& wire, const TrustStore& trust) {
  const SecretKey* key = trust.find(wire.device_id);
  if (key == nullptr ||
      wire.evidence.bytes.size() != tag_length(key->algorithm()) ||
      !mac_verify(*key, signed_body(wire), wire.evidence)) {
    return Rejection::kBadChannelAuth;
  }
  const std::string* chain = find_header(wire.headers, kChainHeader);
  const std::string* statements = find_header(wire.headers, kStatementsHeader);
  if (chain == nullptr || statements == nullptr || wire.headers.size() != 2) {
    return Rejection::kMalformedHeader;
  }
  ServerView view;
  try {
    view.chain = split_names(*chain);
    view.statements = decode_statements_header(*statements);
  } catch (const Error&) {
    return Rejection::kMalformedHeader;
  }
  view.device_id = wire.device_id;
  view.url = wire.url;
  view.payload = wire.payload;
  return view;
}

VerifyResult server_verify(ByteView frame, const TrustStore& trust) {
  WireRequest wire;
  try {
    wire = decode_frame(frame);
  } catch (const Error&) {
    return Rejection::kMalformedHeader;
  }
  return server_verify(wire, trust);
}

VerifyResult server_verify(const AttestedRequest& request,
                           const TrustStore& trust) {
  return server_verify(to_wire(request), trust);
}

std::string describe(const ServerView& view) {
  std::string out = "device=" + view.device_id + " url=" + view.url +
                    " chain=[" + encode_chain_header({view.chain}) +
                    "] statements=[";
  for (std::size_t i = 0; i < view.statements.size(); ++i) {
    if (i) out += ", ";
    out += view.statements[i].speaker_name + " says " +
           view.statements[i].message.method;
  }
  return out + "]";
}

RemoteServer::RemoteServer(TrustStore trust, AppHandler app)
    : trust_(std::move(trust)), app_(std::move(app)) {}

RpcResponse RemoteServer::dispatch(const VerifyResult& result) {
  if (const auto* rejection = std::get_if<Rejection>(&result)) {
    append_log("REJECT " + std::string(to_string(*rejection)));
    std::string reason(to_string(*rejection));
    return RpcResponse{*rejection == Rejection::kBadChannelAuth
                           ? kStatusBadChannelAuth
                           : kStatusMalformed,
                       Bytes(reason.begin(), reason.end())};
  }
  const auto& view = std::get<ServerView>(result);
  append_log("ACCEPT " + describe(view));
  if (!app_) return RpcResponse{200, {}};
  return app_(view);
}

RpcResponse RemoteServer::handle(const WireRequest& wire) {
  return dispatch(server_verify(wire, trust_));
}

RpcResponse RemoteServer::handle_frame(ByteView frame) {
  return dispatch(server_verify(frame, trust_));
}

RpcResponse RemoteServer::handle_plain(ByteView frame) {
  Decoder dec(frame);
  dec.str();
  Bytes body = dec.bytes();
  return RpcResponse{200, std::move(body)};
}

void RemoteServer::append_log(std::string line) {
  std::lock_guard lock(mu_);
  if (sink_) sink_(line);
  log_.push_back(std::move(line));
}

void RemoteServer::set_log_sink(std::function<void(const std::string&)> sink) {
  std::lock_guard lock(mu_);
  sink_ = std::move(sink);
}

std::vector<std::string> RemoteServer::log() const {
  std::lock_guard lock(mu_);
  return log_;
}

RpcResponse InMemoryTransport::send(const WireRequest& wire) {
  Bytes frame = encode_frame(wire);
  {
    std::lock_guard lock(mu_);
    if (tap_) tap_(frame);
    ++frames_;
    last_ = frame;
  }
  return server_->handle_frame(frame);
}

RpcResponse InMemoryTransport::send_plain(std::string_view url,
                                          ByteView payload) {
  Bytes frame = encode_plain(url, payload);
  {
    std::lock_guard lock(mu_);
    ++frames_;
  }
  return server_->handle_plain(frame);
}

void InMemoryTransport::set_tap(Tap tap) {
  std::lock_guard lock(mu_);
  tap_ = std::move(tap);
}

std::size_t InMemoryTransport::frames_sent() const {
  std::lock_guard lock(mu_);
  return frames_;
}

Bytes InMemoryTransport::last_frame() const {
  std::lock_guard lock(mu_);
  return last_;
}

NetworkProvider::NetworkProvider(Bus& bus, DeviceCredential credential,
                                 std::shared_ptr<Transport> transport)
    : bus_(bus),
      credential_(std::move(credential)),
      transport_(std::move(transport)) {
  bus_.spawn(std::string(kServiceName), kServiceUid, {},
             [this](const ProcessHandle&, const CallContext& ctx,
                    const Message& msg) { return serve(ctx, msg); });
}

NetworkProvider::~NetworkProvider() {
  if (bus_.is_live(kServiceName)) bus_.teardown(kServiceName);
}

AttestedRequest NetworkProvider::attest(
    const CallContext& ctx, std::string_view url, ByteView payload,
    std::span<const Statement> statements) const {
  const Authority& authority = bus_.authority();
  AttestedRequest request;
  request.header_statements.reserve(statements.size());
  for (std::size_t i = 0; i < statements.size(); ++i) {
    Verdict v = authority.verify_statement(statements[i]);
    if (v != Verdict::kValid) {
      throw Error(ErrorCode::kStatementVerificationFailed,
                  "statement " + std::to_string(i) + " is " +
                      std::string(to_string(v)),
                  i);
    }
    auto identity = authority.identity(statements[i].speaker.uid);
    if (!identity) {
      throw Error(ErrorCode::kUnresolvablePrincipal,
                  "speaker of statement " + std::to_string(i), i);
    }
    request.header_statements.push_back(
        {identity->app_name, statements[i].message, statements[i].tag});
  }
  request.header_chain =
      authority.resolve_chain(current_chain(ctx, bus_.config().max_chain_depth));
  std::reverse(request.header_chain.names.begin(),
               request.header_chain.names.end());
  request.device_id = credential_.device_id();
  request.url = std::string(url);
  request.payload.assign(payload.begin(), payload.end());
  request.channel_evidence =
      mac_create(credential_.secret_, signed_body(to_wire(request)));
  return request;
}

RpcResponse NetworkProvider::rpc(const CallContext& ctx, std::string_view url,
                                 ByteView payload,
                                 std::span<const Statement> statements) {
  AttestedRequest request = attest(ctx, url, payload, statements);
  return transport_->send(to_wire(request));
}

Reply NetworkProvider::serve(const CallContext& ctx, const Message& msg) {
  Decoder dec(msg.payload);
  std::string url = dec.str();
  Bytes body = dec.bytes();
  dec.expect_end();
  if (msg.method == net_client::kRpc) {
    return Reply{encode_response(rpc(ctx, url, body, ctx.statements))};
  }
  if (msg.method == net_client::kRpcPlain) {
    return Reply{encode_response(transport_->send_plain(url, body))};
  }
  throw Error(ErrorCode::kUnknownTarget,
              "network provider has no method '" + msg.method + "'");
}

namespace net_client {

RpcResponse rpc(Bus& bus, const ProcessHandle& from, std::string_view url,
                ByteView payload, std::vector<Statement> statements,
                ChainMode mode) {
  Reply reply = bus.call(from, NetworkProvider::kServiceName,
                         Message{std::string(kRpc), encode_plain(url, payload), 0},
                         mode, std::move(statements));
  return decode_response(reply.payload);
}

RpcResponse rpc_plain(Bus& bus, const ProcessHandle& from, std::string_view url,
                      ByteView payload) {
  CallOptions options;
  options.track_provenance = false;
  Reply reply = bus.call(
      from, NetworkProvider::kServiceName,
      Message{std::string(kRpcPlain), encode_plain(url, payload), 0}, options);
  return decode_response(reply.payload);
}

}  // namespace net_client

}  // namespace provipc
