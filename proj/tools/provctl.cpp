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
// provctl: scenarios, benchmarks, and a demo verifier server.
//
// Exit codes: 0 expected outcome, 1 security rejection (or an unexpected
// scenario outcome), 2 usage or configuration error.

#include <csignal>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "provipc/bench.hpp"
#include "provipc/config.hpp"
#include "provipc/encoding.hpp"
#include "provipc/error.hpp"
#include "provipc/http_transport.hpp"
#include "provipc/scenario_clickfraud.hpp"
#include "provipc/scenario_paybuddy.hpp"

namespace {

using namespace provipc;

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;

struct GlobalFlags {
  std::string config_path;
  std::optional<std::string> mac_algorithm;
  std::optional<std::uint64_t> freshness_ms;
  std::optional<std::size_t> max_chain_depth;
  std::optional<std::size_t> max_payload;
  std::optional<std::string> transport;
  std::optional<std::uint64_t> seed;

  Config resolve() const {
    Config c = config_path.empty() ? Config{} : load_config(config_path);
    if (mac_algorithm) c.set("mac_algorithm", *mac_algorithm);
    if (freshness_ms) c.freshness_ms = *freshness_ms;
    if (max_chain_depth) c.set("max_chain_depth", std::to_string(*max_chain_depth));
    if (max_payload) c.max_payload = *max_payload;
    if (transport) c.set("transport", *transport);
    if (seed) c.seed = *seed;
    return c;
  }
};

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot read " + path);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

// Frames on disk may be raw bytes or hex text.
Bytes read_frame(const std::string& path) {
  Bytes raw = read_file(path);
  std::string text(raw.begin(), raw.end());
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.pop_back();
  }
  try {
    return from_hex(text);
  } catch (const Error&) {
    return raw;
  }
}

void print_table(const std::vector<BenchResult>& results) {
  std::printf("%-18s %8s %7s %12s %12s %12s\n", "name", "param", "trials",
              "mean_ns", "p50_ns", "p95_ns");
  for (const auto& r : results) {
    std::printf("%-18s %8llu %7u %12llu %12llu %12llu\n", r.name.c_str(),
                static_cast<unsigned long long>(r.param), r.trials,
                static_cast<unsigned long long>(r.mean_ns),
                static_cast<unsigned long long>(r.p50_ns),
                static_cast<unsigned long long>(r.p95_ns));
  }
}

// Forwards to another transport, keeping a copy of each attested frame.
class RecordingTransport : public Transport {
 public:
  explicit RecordingTransport(std::shared_ptr<Transport> inner)
      : inner_(std::move(inner)) {}
  RpcResponse send(const WireRequest& wire) override {
    last_frame = encode_frame(wire);
    return inner_->send(wire);
  }
  RpcResponse send_plain(std::string_view url, ByteView payload) override {
    return inner_->send_plain(url, payload);
  }
  Bytes last_frame;

 private:
  std::shared_ptr<Transport> inner_;
};

int run_serve(const std::string& host, int port, const std::string& trust_path) {
  TrustStore trust = TrustStore::load(trust_path);
  if (trust.empty()) {
    throw Error(ErrorCode::kConfigError, "trust store " + trust_path + " is empty");
  }
  // Wait for SIGINT/SIGTERM on this thread; the server threads inherit the
  // blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto server = std::make_shared<RemoteServer>(std::move(trust), nullptr);
  VerifierHttpServer http(server, [](const std::string& line) {
    std::cout << line << std::endl;
  });
  int bound = http.start(host, port);
  std::cout << "listening on " << host << ":" << bound << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  http.stop();
  return kExitOk;
}

int run_send(const Config& config, const std::string& host, int port,
             const std::string& credential_path, const std::string& url,
             const std::string& payload, bool impersonate,
             const std::string& frame_out) {
  auto http = std::make_shared<HttpTransport>(host, port);
  RpcResponse response;
  Bytes frame;
  if (impersonate) {
    // An app has no access to the device credential, so the best it can do
    // is build the request itself and sign it with a key of its own.
    std::string device_id = DeviceCredential::load(credential_path).device_id();
    WireRequest wire;
    wire.device_id = device_id;
    wire.url = url;
    wire.payload.assign(payload.begin(), payload.end());
    wire.headers = {{std::string(kChainHeader), "BankApp"},
                    {std::string(kStatementsHeader), encode_statements_header({})}};
    wire.evidence = mac_create(keygen(config.mac_algorithm), signed_body(wire));
    frame = encode_frame(wire);
    response = http->send(wire);
  } else {
    BusConfig bc;
    bc.algorithm = config.mac_algorithm;
    bc.max_chain_depth = config.max_chain_depth;
    bc.max_payload = config.max_payload;
    Bus bus(bc);
    auto recorder = std::make_shared<RecordingTransport>(http);
    NetworkProvider provider(bus, DeviceCredential::load(credential_path), recorder);
    auto app = bus.spawn("DemoApp", 20001, {});
    Statement s = bus.make_statement(
        app, Message{"request", Bytes(payload.begin(), payload.end()), 0});
    response = net_client::rpc(bus, app, url,
                               Bytes(payload.begin(), payload.end()), {s});
    frame = recorder->last_frame;
  }
  if (!frame_out.empty()) {
    std::ofstream(frame_out) << to_hex(frame) << "\n";
  }
  std::cout << "status " << response.status << "\n";
  return response.status == 200 ? kExitOk : kExitRejected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"provenance-aware IPC toolkit"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--config", g.config_path, "key=value configuration file");
  app.add_option("--mac-algorithm", g.mac_algorithm, "hmac-sha1 | hmac-sha256");
  app.add_option("--freshness-ms", g.freshness_ms, "click freshness window");
  app.add_option("--max-chain-depth", g.max_chain_depth, "call chain depth limit");
  app.add_option("--max-payload", g.max_payload, "IPC payload limit in bytes");
  app.add_option("--transport", g.transport, "memory | http");
  app.add_option("--seed", g.seed, "seed for ids and payloads");

  auto* scenario = app.add_subcommand("scenario", "run an end-to-end scenario");
  scenario->require_subcommand(1);
  auto* paybuddy = scenario->add_subcommand("paybuddy", "micropayment flow");
  bool deny = false;
  std::string tamper = "none";
  paybuddy->add_flag("--deny", deny, "user declines the payment");
  paybuddy->add_option("--tamper", tamper, "none | mutate | replay")
      ->check(CLI::IsMember({"none", "mutate", "replay"}));
  auto* clickfraud = scenario->add_subcommand("clickfraud", "ad click flow");
  std::string attack = "none";
  clickfraud->add_option("--attack", attack, "none | synthesize | replay | obscure")
      ->check(CLI::IsMember({"none", "synthesize", "replay", "obscure"}));

  auto* bench = app.add_subcommand("bench", "run microbenchmarks");
  std::string which;
  std::string csv_path;
  BenchOptions bench_options;
  int hops = 0;
  bench->add_option("which", which, "statements | ipc | resolution | rpc | all")
      ->required()
      ->check(CLI::IsMember({"statements", "ipc", "resolution", "rpc", "all"}));
  bench->add_option("--csv", csv_path, "write CSV here");
  bench->add_option("--runs", bench_options.runs, "runs per point")->check(CLI::Range(1, 1000));
  bench->add_option("--trials", bench_options.trials, "trials per run")
      ->check(CLI::Range(1, 1000000));
  bench->add_option("--ipc-trials", bench_options.ipc_trials, "trials per run for ipc")
      ->check(CLI::Range(1, 1000000));
  bench->add_option("--hops", hops, "ipc: 1 or 2 (default both)")->check(CLI::Range(1, 2));

  auto* serve = app.add_subcommand("serve", "run the remote verifier over HTTP");
  std::string host = "127.0.0.1";
  int port = 8443;
  std::string trust_path;
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port (0 picks one)")->check(CLI::Range(0, 65535));
  serve->add_option("--trust-store", trust_path, "endorsed devices")->required();

  auto* verify = app.add_subcommand("verify", "check a saved attested frame");
  std::string frame_path;
  verify->add_option("--trust-store", trust_path, "endorsed devices")->required();
  verify->add_option("frame", frame_path, "frame file (hex or raw)")->required();

  auto* provision = app.add_subcommand("provision", "make a device credential");
  std::string device_id;
  std::string credential_path;
  provision->add_option("--device-id", device_id, "device id")->required();
  provision->add_option("--credential", credential_path, "credential output")->required();
  provision->add_option("--trust-store", trust_path, "trust store to append to")->required();

  auto* send = app.add_subcommand("send", "send one attested request over HTTP");
  std::string url = "https://example.test/";
  std::string payload = "hello";
  std::string frame_out;
  bool impersonate = false;
  send->add_option("--host", host, "server address");
  send->add_option("--port", port, "server port")->required();
  send->add_option("--credential", credential_path, "device credential")->required();
  send->add_option("--url", url, "request url");
  send->add_option("--payload", payload, "request body");
  send->add_option("--frame-out", frame_out, "save the frame as hex");
  send->add_flag("--impersonate", impersonate,
                 "sign with an app-held key instead of the device credential");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    Config config = g.resolve();
    ScenarioOptions options = config.scenario_options();

    if (paybuddy->parsed()) {
      auto t = run_paybuddy(!deny, parse_paybuddy_tamper(tamper), options);
      std::cout << t.render();
      return t.expected ? kExitOk : kExitRejected;
    }
    if (clickfraud->parsed()) {
      auto t = run_clickfraud(parse_click_attack(attack), options);
      std::cout << t.render();
      for (auto v : t.verdicts) std::cout << "verdict: " << to_string(v) << "\n";
      return t.expected ? kExitOk : kExitRejected;
    }
    if (bench->parsed()) {
      bench_options.seed = config.seed;
      bench_options.algorithm = config.mac_algorithm;
      std::vector<BenchResult> results;
      auto add = [&](std::vector<BenchResult> r) {
        results.insert(results.end(), r.begin(), r.end());
      };
      bool all = which == "all";
      if (all || which == "statements") add(bench_statements(statement_sizes(), bench_options));
      if (all || which == "ipc") {
        if (hops != 2) add(bench_ipc(ipc_sizes(), 1, bench_options));
        if (hops != 1) add(bench_ipc(ipc_sizes(), 2, bench_options));
      }
      if (all || which == "resolution") add(bench_resolution(resolution_depths(), bench_options));
      if (all || which == "rpc") add(bench_rpc(rpc_sizes(), bench_options));
      if (csv_path.empty()) {
        write_csv(std::cout, results);
      } else {
        std::ofstream out(csv_path);
        write_csv(out, results);
        if (!out) throw Error(ErrorCode::kConfigError, "cannot write " + csv_path);
        print_table(results);
      }
      return kExitOk;
    }
    if (serve->parsed()) return run_serve(host, port, trust_path);
    if (verify->parsed()) {
      TrustStore trust = TrustStore::load(trust_path);
      VerifyResult r = server_verify(read_frame(frame_path), trust);
      if (auto* view = std::get_if<ServerView>(&r)) {
        std::cout << "ACCEPT " << describe(*view) << "\n";
        return kExitOk;
      }
      std::cout << "REJECT " << to_string(std::get<Rejection>(r)) << "\n";
      return kExitRejected;
    }
    if (provision->parsed()) {
      auto cred = DeviceCredential::manufacture(device_id, config.mac_algorithm);
      cred.save(credential_path);
      TrustStore trust;
      if (std::ifstream(trust_path)) trust = TrustStore::load(trust_path);
      trust.endorse(cred);
      trust.save(trust_path);
      std::cout << "provisioned " << device_id << "\n";
      return kExitOk;
    }
    if (send->parsed()) {
      return run_send(config, host, port, credential_path, url, payload,
                      impersonate, frame_out);
    }
  } catch (const Error& e) {
    std::cerr << "provctl: " << e.what() << "\n";
    return e.code() == ErrorCode::kConfigError ? kExitUsage : kExitRejected;
  } catch (const std::exception& e) {
    std::cerr << "provctl: " << e.what() << "\n";
    return kExitRejected;
  }
  return kExitUsage;
}
