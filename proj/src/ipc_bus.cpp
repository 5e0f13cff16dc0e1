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
#include "provipc/ipc_bus.hpp"

#include <algorithm>
#include <atomic>

#include "provipc/crypto.hpp"
#include "provipc/encoding.hpp"
#include "provipc/error.hpp"

namespace provipc {
namespace detail {

struct Process {
  Principal principal;
  AppIdentity identity;
  Handler handler;

  // Serializes execution inside this process. A synchronous call runs the
  // handler on the caller's thread while holding this lock.
  std::mutex exec_mu;
  std::atomic<bool> dead{false};

  std::mutex key_mu;
  std::optional<SecretKey> key;
};

}  // namespace detail

namespace {

using detail::Process;

// One frame per handler currently executing on this thread. `outer` links to
// the frame of the process that made the call, so the chain of frames is the
// synchronous call path.
struct ActiveCall {
  const Process* process;
  const CallContext* ctx;
  const CallChain* effective;
  const ActiveCall* outer;
};

thread_local const ActiveCall* t_active = nullptr;

bool on_call_path(const Process* p) {
  for (const ActiveCall* f = t_active; f != nullptr; f = f->outer) {
    if (f->process == p) return true;
  }
  return false;
}

Bytes marshal(const Message& msg, const std::vector<Statement>& statements,
              const CallChain* antecedents) {
  std::size_t estimate = msg.method.size() + msg.payload.size() + 32;
  for (const auto& s : statements) {
    estimate += s.message.method.size() + s.message.payload.size() +
                s.tag.bytes.size() + 40;
  }
  if (antecedents != nullptr) estimate += 8 * antecedents->size();
  Encoder enc;
  enc.reserve(estimate).message(msg).count(statements.size());
  for (const auto& s : statements) enc.statement(s);
  if (antecedents != nullptr) {
    enc.u8(1).chain(*antecedents);
  } else {
    enc.u8(0);
  }
  return enc.take();
}

Message unmarshal(ByteView parcel, CallContext& ctx) {
  Decoder dec(parcel);
  Message msg = dec.message();
  std::size_t n = dec.count();
  ctx.statements.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ctx.statements.push_back(dec.statement());
  ctx.tracked = dec.u8() != 0;
  if (ctx.tracked) ctx.antecedent_chain = dec.chain();
  dec.expect_end();
  return msg;
}

bool valid_app_name(std::string_view name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return c == ',' || static_cast<unsigned char>(c) < 0x20 || c == 0x7f;
  });
}

}  // namespace

CallChain current_chain(const CallContext& ctx, std::size_t max_depth) {
  return chain_prepend(ctx.antecedent_chain, ctx.immediate_caller, max_depth);
}

const Principal& ProcessHandle::principal() const { return proc_->principal; }

const AppIdentity& ProcessHandle::identity() const { return proc_->identity; }

Bus::Bus(BusConfig config) : config_(config), authority_(config.algorithm) {
  spawn(std::string(kAuthorityService), kAuthorityUid, {},
        [this](const ProcessHandle&, const CallContext& ctx,
               const Message& msg) { return serve_authority(ctx, msg); });
}

Bus::~Bus() {
  std::vector<std::string> names;
  {
    std::shared_lock lock(mu_);
    for (const auto& [name, proc] : processes_) {
      if (!proc->dead) names.push_back(name);
    }
  }
  // The authority manager goes last so app teardown can still reach it.
  std::stable_partition(names.begin(), names.end(), [](const std::string& n) {
    return n != kAuthorityService;
  });
  for (const auto& name : names) teardown(name);
}

ProcessHandle Bus::spawn(std::string app_name, std::uint32_t uid,
                         PermissionSet permissions, Handler handler) {
  if (!valid_app_name(app_name)) {
    throw Error(ErrorCode::kInvalidAppName, "'" + app_name + "'");
  }
  auto proc = std::make_shared<Process>();
  proc->identity = AppIdentity{app_name, std::move(permissions)};
  proc->handler = std::move(handler);
  {
    std::unique_lock lock(mu_);
    auto existing = processes_.find(app_name);
    if (existing != processes_.end() && !existing->second->dead) {
      throw Error(ErrorCode::kDuplicateApp, "'" + app_name + "' is running");
    }
    for (const auto& [name, other] : processes_) {
      if (!other->dead && other->principal.uid == uid) {
        throw Error(ErrorCode::kDuplicateApp,
                    "uid " + std::to_string(uid) + " already belongs to '" +
                        name + "'");
      }
    }
    proc->principal = Principal{uid, next_pid_++};
    authority_.admit(proc->principal, proc->identity);
    processes_.insert_or_assign(app_name, proc);
  }
  return ProcessHandle(proc);
}

void Bus::teardown(std::string_view app_name) {
  std::shared_ptr<Process> proc;
  {
    std::shared_lock lock(mu_);
    auto it = processes_.find(app_name);
    if (it == processes_.end()) {
      throw Error(ErrorCode::kUnknownTarget, "'" + std::string(app_name) + "'");
    }
    proc = it->second;
  }
  if (proc->dead.exchange(true)) return;
  // Wait for a handler that is mid-flight, unless it is the one asking.
  if (!on_call_path(proc.get())) {
    std::lock_guard drain(proc->exec_mu);
  }
  authority_.retire(proc->principal);
}

bool Bus::is_live(std::string_view app_name) const {
  std::shared_lock lock(mu_);
  auto it = processes_.find(app_name);
  return it != processes_.end() && !it->second->dead;
}

std::shared_ptr<Process> Bus::live_process(const ProcessHandle& h) const {
  std::shared_lock lock(mu_);
  auto it = processes_.find(h.name());
  if (it == processes_.end() || it->second != h.proc_) {
    throw Error(ErrorCode::kUnknownPrincipal,
                "handle for '" + h.name() + "' does not belong to this bus");
  }
  if (it->second->dead) {
    throw Error(ErrorCode::kTargetDead, "'" + h.name() + "' has exited");
  }
  return it->second;
}

Reply Bus::call(const ProcessHandle& from, std::string_view to,
                const Message& msg, ChainMode mode,
                std::vector<Statement> statements) {
  CallOptions options;
  options.chain = mode;
  options.statements = std::move(statements);
  return call(from, to, msg, std::move(options));
}

Reply Bus::call(const ProcessHandle& from, std::string_view to,
                const Message& msg, CallOptions options) {
  std::shared_ptr<Process> sender = live_process(from);
  if (msg.payload.size() > config_.max_payload) {
    throw Error(ErrorCode::kPayloadTooLarge,
                std::to_string(msg.payload.size()) + " bytes");
  }
  std::shared_ptr<Process> target;
  {
    std::shared_lock lock(mu_);
    auto it = processes_.find(to);
    if (it == processes_.end()) {
      throw Error(ErrorCode::kUnknownTarget, "'" + std::string(to) + "'");
    }
    target = it->second;
  }
  if (target->dead) {
    throw Error(ErrorCode::kTargetDead, "'" + std::string(to) + "'");
  }
  if (on_call_path(target.get())) {
    throw Error(ErrorCode::kReentrantCall,
                "'" + std::string(to) + "' is waiting on this call path");
  }

  // Only a handler running inside `from` can pass on the chain it received.
  const bool inside_sender =
      t_active != nullptr && t_active->process == sender.get();

  Bytes parcel;
  if (options.track_provenance) {
    const CallChain* antecedents = nullptr;
    CallChain none;
    if (options.claimed_antecedents) {
      antecedents = &*options.claimed_antecedents;
    } else if (options.chain == ChainMode::kPropagate && inside_sender &&
               t_active->effective != nullptr) {
      antecedents = t_active->effective;
    } else {
      antecedents = &none;
    }
    if (antecedents->size() >= config_.max_chain_depth) {
      throw Error(ErrorCode::kChainDepthExceeded,
                  "callee chain would exceed " +
                      std::to_string(config_.max_chain_depth) + " links");
    }
    parcel = marshal(msg, options.statements, antecedents);
  } else {
    parcel = marshal(msg, options.statements, nullptr);
  }

  std::unique_lock exec(target->exec_mu);
  if (target->dead) {
    throw Error(ErrorCode::kTargetDead,
                "'" + std::string(to) + "' exited before handling call");
  }
  CallContext ctx;
  ctx.immediate_caller = sender->principal;
  Message delivered = unmarshal(parcel, ctx);
  std::optional<CallChain> effective;
  if (ctx.tracked) {
    effective.emplace(current_chain(ctx, config_.max_chain_depth));
  }
  if (!target->handler) return Reply{};

  ActiveCall frame{target.get(), &ctx, effective ? &*effective : nullptr,
                   t_active};
  t_active = &frame;
  struct Restore {
    const ActiveCall* outer;
    ~Restore() { t_active = outer; }
  } restore{frame.outer};
  return target->handler(ProcessHandle(target), ctx, delivered);
}

Statement Bus::make_statement(const ProcessHandle& from, const Message& msg) {
  std::shared_ptr<Process> proc = live_process(from);
  Bytes signed_bytes = statement_signing_bytes(proc->principal, msg);
  std::lock_guard lock(proc->key_mu);
  if (!proc->key) proc->key = authority_.register_key(proc->principal);
  return Statement{proc->principal, msg, mac_create(*proc->key, signed_bytes)};
}

void Bus::rekey(const ProcessHandle& process) {
  std::shared_ptr<Process> proc = live_process(process);
  std::lock_guard lock(proc->key_mu);
  proc->key = authority_.register_key(proc->principal);
}

Reply Bus::serve_authority(const CallContext& ctx, const Message& msg) {
  if (msg.method == authority_client::kVerify) {
    Reply reply;
    reply.payload.reserve(ctx.statements.size());
    for (const auto& s : ctx.statements) {
      reply.payload.push_back(
          static_cast<std::uint8_t>(authority_.verify_statement(s)));
    }
    return reply;
  }
  if (msg.method == authority_client::kResolve) {
    CallChain chain = canonical_decode<CallChain>(msg.payload);
    return Reply{canonical_encode(authority_.resolve_chain(chain))};
  }
  throw Error(ErrorCode::kUnknownTarget,
              "authority manager has no method '" + msg.method + "'");
}

namespace authority_client {

std::vector<Verdict> verify(Bus& bus, const ProcessHandle& from,
                            std::vector<Statement> statements) {
  const std::size_t n = statements.size();
  Reply reply = bus.call(from, Bus::kAuthorityService,
                         Message{std::string(kVerify), {}, 0},
                         ChainMode::kPropagate, std::move(statements));
  if (reply.payload.size() != n) {
    throw Error(ErrorCode::kMalformedEncoding,
                "authority returned " + std::to_string(reply.payload.size()) +
                    " verdicts for " + std::to_string(n) + " statements");
  }
  std::vector<Verdict> out;
  out.reserve(n);
  for (std::uint8_t v : reply.payload) {
    if (v > static_cast<std::uint8_t>(Verdict::kUnknownSpeaker)) {
      throw Error(ErrorCode::kMalformedEncoding, "bad verdict byte");
    }
    out.push_back(static_cast<Verdict>(v));
  }
  return out;
}

ResolvedChain resolve(Bus& bus, const ProcessHandle& from,
                      const CallChain& chain) {
  Reply reply =
      bus.call(from, Bus::kAuthorityService,
               Message{std::string(kResolve), canonical_encode(chain), 0});
  return canonical_decode<ResolvedChain>(reply.payload);
}

}  // namespace authority_client

}  // namespace provipc
