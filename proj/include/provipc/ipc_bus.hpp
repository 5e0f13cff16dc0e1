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

// Simulated multi-process environment.
//
// Each spawned app is an actor: private state, reachable only through
// messages, executing one call at a time. Calls are synchronous
// request/reply and migrate the caller's thread into the callee (in the
// style of lightweight RPC): the handler runs on the calling thread while
// holding the callee's execution lock, so distinct processes still run
// concurrently when driven from different threads.
//
// The bus marshals every call into a parcel and stamps the callee's context
// with the sender's principal, which the sender cannot influence. With
// provenance tracking on (the default) the sender's effective call chain
// rides along in the parcel, so a callee sees "caller says antecedents
// say ...".

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "provipc/authority.hpp"
#include "provipc/types.hpp"

namespace provipc {

struct BusConfig {
  MacAlgorithm algorithm = MacAlgorithm::kHmacSha1;
  std::size_t max_chain_depth = kDefaultMaxChainDepth;
  std::size_t max_payload = kDefaultMaxPayload;
};

enum class ChainMode : std::uint8_t {
  kPropagate,
  // Privilege drop: the callee sees only the immediate caller.
  kDrop,
};

struct CallContext {
  // Supplied by the bus.
  Principal immediate_caller;
  // Supplied by the caller's stub, so a malicious caller can put anything
  // here. It can never displace immediate_caller from the head.
  CallChain antecedent_chain;
  std::vector<Statement> statements;
  bool tracked = true;
};

/// prepend(antecedent_chain, immediate_caller).
CallChain current_chain(const CallContext& ctx,
                        std::size_t max_depth = kDefaultMaxChainDepth);

struct Reply {
  Bytes payload;
};

class Bus;
class ProcessHandle;

namespace detail {
struct Process;
}

using Handler = std::function<Reply(const ProcessHandle& self,
                                    const CallContext& ctx, const Message& msg)>;

struct CallOptions {
  ChainMode chain = ChainMode::kPropagate;
  std::vector<Statement> statements;
  // Replaces the antecedents the bus would have attached. Models a caller
  // running a tampered stub.
  std::optional<CallChain> claimed_antecedents;
  // Off for the stock-IPC baseline in benchmarks: no chain is marshaled and
  // the callee's antecedents are empty.
  bool track_provenance = true;
};

/// Reference to a live (or torn-down) process. Only the bus creates these.
class ProcessHandle {
 public:
  const Principal& principal() const;
  const AppIdentity& identity() const;
  const std::string& name() const { return identity().app_name; }

  bool operator==(const ProcessHandle& other) const {
    return proc_ == other.proc_;
  }

 private:
  friend class Bus;
  explicit ProcessHandle(std::shared_ptr<detail::Process> proc)
      : proc_(std::move(proc)) {}

  std::shared_ptr<detail::Process> proc_;
};

class Bus {
 public:
  static constexpr std::string_view kAuthorityService = "AuthorityManager";
  static constexpr std::uint32_t kAuthorityUid = 1000;

  explicit Bus(BusConfig config = {});
  ~Bus();

  Bus(const Bus&) = delete;
  Bus& operator=(const Bus&) = delete;

  const BusConfig& config() const noexcept { return config_; }

  /// Starts a process under a fresh pid. A null handler echoes nothing back.
  /// Throws kDuplicateApp if the name or uid is held by a live process, and
  /// kInvalidAppName for empty names or names containing ',' or control
  /// characters.
  ProcessHandle spawn(std::string app_name, std::uint32_t uid,
                      PermissionSet permissions, Handler handler = {});

  /// Marks the process dead (later and waiting calls fail with
  /// kTargetDead), waits for an in-flight handler, and removes its key and
  /// directory entry from the authority.
  void teardown(std::string_view app_name);

  bool is_live(std::string_view app_name) const;

  /// Synchronous call. Errors thrown by the callee's handler are rethrown
  /// here. Throws kUnknownTarget, kTargetDead, kChainDepthExceeded,
  /// kPayloadTooLarge, or kReentrantCall if `to` is already executing further
  /// up this synchronous call path. Two threads that call into each other's
  /// processes in opposite order can still deadlock.
  Reply call(const ProcessHandle& from, std::string_view to, const Message& msg,
             CallOptions options = {});
  Reply call(const ProcessHandle& from, std::string_view to, const Message& msg,
             ChainMode mode, std::vector<Statement> statements = {});

  /// Signs `msg` as `from`, registering a key on first use.
  Statement make_statement(const ProcessHandle& from, const Message& msg);

  /// Asks the authority for a replacement key. Statements signed under the
  /// previous key stop verifying.
  void rekey(const ProcessHandle& process);

  const Authority& authority() const noexcept { return authority_; }

 private:
  std::shared_ptr<detail::Process> live_process(const ProcessHandle& h) const;
  Reply serve_authority(const CallContext& ctx, const Message& msg);

  const BusConfig config_;
  Authority authority_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<detail::Process>, std::less<>>
      processes_;
  std::uint32_t next_pid_ = 100;
};

// Client side of the authority manager's bus endpoints.
namespace authority_client {

inline constexpr std::string_view kVerify = "verify_statements";
inline constexpr std::string_view kResolve = "resolve_chain";

std::vector<Verdict> verify(Bus& bus, const ProcessHandle& from,
                            std::vector<Statement> statements);
ResolvedChain resolve(Bus& bus, const ProcessHandle& from,
                      const CallChain& chain);

}  // namespace authority_client

}  // namespace provipc
