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
#include "provipc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <ostream>
#include <random>

#include "provipc/ipc_bus.hpp"
#include "provipc/net_provider.hpp"

namespace provipc {
namespace {

using Clock = std::chrono::steady_clock;
using Samples = std::vector<std::uint64_t>;

template <class Fn>
std::uint64_t time_ns(Fn&& fn) {
  auto t0 = Clock::now();
  fn();
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0)
          .count());
}

std::uint64_t median(Samples v) {
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2),
                   v.end());
  return v[v.size() / 2];
}

std::uint64_t percentile(Samples& sorted, double q) {
  auto i = static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1) + 0.5);
  return sorted[i];
}

BenchResult summarize(std::string name, std::uint64_t param,
                      const std::vector<Samples>& runs) {
  std::vector<std::uint64_t> per_run;
  Samples pooled;
  for (const auto& r : runs) {
    per_run.push_back(median(r));
    pooled.insert(pooled.end(), r.begin(), r.end());
  }
  std::sort(per_run.begin(), per_run.end());
  std::size_t lo = per_run.size() > 2 ? 1 : 0;
  std::size_t hi = per_run.size() > 2 ? per_run.size() - 1 : per_run.size();
  double sum = 0;
  for (std::size_t i = lo; i < hi; ++i) sum += static_cast<double>(per_run[i]);
  std::sort(pooled.begin(), pooled.end());
  BenchResult r;
  r.name = std::move(name);
  r.param = param;
  r.trials = static_cast<std::uint32_t>(pooled.size());
  r.mean_ns = static_cast<std::uint64_t>(sum / static_cast<double>(hi - lo) + 0.5);
  r.p50_ns = percentile(pooled, 0.50);
  r.p95_ns = percentile(pooled, 0.95);
  return r;
}

// One benchmark point: a name, a parameter, and the operation to time.
struct Point {
  std::string name;
  std::uint64_t param;
  std::function<void()> fn;
};

// Times every point in turn within each trial, rotating the starting point,
// so slow machine-level drift lands on all points alike instead of on
// whichever sizes happen to run late.
std::vector<BenchResult> sweep(const std::vector<Point>& points,
                               const BenchOptions& o) {
  const std::size_t n = points.size();
  for (std::uint32_t i = 0; i < o.trials; ++i) {  // priming run
    for (const auto& p : points) p.fn();
  }
  std::vector<std::vector<Samples>> samples(n, std::vector<Samples>(o.runs));
  for (std::uint32_t run = 0; run < o.runs; ++run) {
    for (auto& s : samples) s[run].reserve(o.trials);
    for (std::uint32_t i = 0; i < o.trials; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        std::size_t j = (k + i) % n;
        samples[j][run].push_back(time_ns(points[j].fn));
      }
    }
  }
  std::vector<BenchResult> out;
  for (std::size_t j = 0; j < n; ++j) {
    out.push_back(summarize(points[j].name, points[j].param, samples[j]));
  }
  return out;
}

BusConfig bus_config(const BenchOptions& o) {
  BusConfig c;
  c.algorithm = o.algorithm;
  c.max_payload = std::max<std::size_t>(c.max_payload, 64 * 1024);
  return c;
}

}  // namespace

std::vector<std::uint64_t> statement_sizes() {
  return {10, 500, 1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000};
}

std::vector<std::uint64_t> ipc_sizes() {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s <= 6336; s += 64) out.push_back(s);
  return out;
}

std::vector<std::uint32_t> resolution_depths() { return {1, 2, 4, 8}; }

std::vector<std::uint64_t> rpc_sizes() {
  return {0, 256, 1024, 2048, 4096, 8192, 16384};
}

Bytes bench_payload(std::uint64_t seed, std::uint64_t size) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + size);
  Bytes out(size);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

std::vector<BenchResult> bench_statements(const std::vector<std::uint64_t>& sizes,
                                          const BenchOptions& o) {
  Bus bus(bus_config(o));
  auto app = bus.spawn("BenchApp", 5000, {});
  std::vector<Message> messages;
  std::vector<std::vector<Statement>> batches;
  for (std::uint64_t size : sizes) {
    messages.push_back(Message{"bench", bench_payload(o.seed, size), 0});
    batches.push_back({bus.make_statement(app, messages.back())});
  }
  std::vector<Point> points;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    points.push_back({"statement_create", sizes[i],
                      [&, i] { (void)bus.make_statement(app, messages[i]); }});
    points.push_back({"statement_verify", sizes[i], [&, i] {
                        (void)authority_client::verify(bus, app, batches[i]);
                      }});
  }
  return sweep(points, o);
}

std::vector<BenchResult> bench_ipc(const std::vector<std::uint64_t>& sizes,
                                   int hops, const BenchOptions& o) {
  Bus bus(bus_config(o));
  auto driver = bus.spawn("Driver", 5000, {});
  bus.spawn("Echo2", 5002, {}, [](const ProcessHandle&, const CallContext&,
                                  const Message&) { return Reply{}; });
  // The middle hop passes tracking through so "off" stays off end to end.
  bus.spawn("Echo1", 5001, {}, [&bus](const ProcessHandle& self,
                                      const CallContext& ctx, const Message& m) {
    CallOptions opt;
    opt.track_provenance = ctx.tracked;
    return bus.call(self, "Echo2", m, opt);
  });
  const std::string target = hops == 1 ? "Echo2" : "Echo1";
  const std::string prefix = "ipc_" + std::to_string(hops) + "hop_";
  std::vector<Message> messages;
  for (std::uint64_t size : sizes) {
    messages.push_back(Message{"echo", bench_payload(o.seed, size), 0});
  }
  CallOptions off;
  off.track_provenance = false;
  std::vector<Point> points;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    points.push_back({prefix + "on", sizes[i],
                      [&, i] { (void)bus.call(driver, target, messages[i], {}); }});
    points.push_back({prefix + "off", sizes[i],
                      [&, i] { (void)bus.call(driver, target, messages[i], off); }});
  }
  BenchOptions ipc = o;
  ipc.trials = o.ipc_trials;
  return sweep(points, ipc);
}

std::vector<BenchResult> bench_ipc(const std::vector<std::uint64_t>& sizes,
                                   int hops, bool provenance,
                                   const BenchOptions& o) {
  std::vector<BenchResult> out;
  std::string suffix = provenance ? "_on" : "_off";
  for (auto& r : bench_ipc(sizes, hops, o)) {
    if (r.name.ends_with(suffix)) out.push_back(std::move(r));
  }
  return out;
}

std::vector<BenchResult> bench_resolution(const std::vector<std::uint32_t>& depths,
                                          const BenchOptions& o) {
  std::uint32_t max_depth = 0;
  for (auto d : depths) max_depth = std::max(max_depth, d);
  Bus bus(bus_config(o));
  auto driver = bus.spawn("Resolver", 5000, {});
  std::vector<ProcessHandle> links;
  std::vector<Statement> statements;
  for (std::uint32_t i = 0; i < max_depth; ++i) {
    links.push_back(bus.spawn("Link" + std::to_string(i), 6000 + i, {}));
    statements.push_back(bus.make_statement(
        links.back(), Message{"bench", bench_payload(o.seed, 64), i}));
  }
  std::vector<CallChain> chains;
  std::vector<std::vector<Statement>> batches;
  for (std::uint32_t depth : depths) {
    std::vector<Principal> principals;
    for (std::uint32_t i = 0; i < depth; ++i) principals.push_back(links[i].principal());
    chains.emplace_back(principals);
    batches.emplace_back(statements.begin(), statements.begin() + depth);
  }
  std::vector<Point> points;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    points.push_back({"resolution", depths[i], [&, i] {
                        (void)authority_client::resolve(bus, driver, chains[i]);
                        (void)authority_client::verify(bus, driver, batches[i]);
                      }});
  }
  return sweep(points, o);
}

std::vector<BenchResult> bench_rpc(const std::vector<std::uint64_t>& sizes,
                                   const BenchOptions& o) {
  Bus bus(bus_config(o));
  auto device = DeviceCredential::manufacture("bench-device", o.algorithm);
  TrustStore trust;
  trust.endorse(device);
  auto server = std::make_shared<RemoteServer>(
      std::move(trust), [](const ServerView& v) { return RpcResponse{200, v.payload}; });
  NetworkProvider provider(bus, std::move(device),
                           std::make_shared<InMemoryTransport>(server));
  auto app = bus.spawn("BenchApp", 5000, {});
  std::vector<Statement> statements{
      bus.make_statement(app, Message{"bench", bench_payload(o.seed, 64), 0})};
  std::vector<Bytes> payloads;
  for (std::uint64_t size : sizes) payloads.push_back(bench_payload(o.seed, size));
  std::vector<Point> points;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    points.push_back({"rpc_attested", sizes[i], [&, i] {
                        (void)net_client::rpc(bus, app, "https://bench/", payloads[i],
                                              statements);
                      }});
    points.push_back({"rpc_plain", sizes[i], [&, i] {
                        (void)net_client::rpc_plain(bus, app, "https://bench/",
                                                    payloads[i]);
                      }});
  }
  return sweep(points, o);
}

void write_csv(std::ostream& out, const std::vector<BenchResult>& results) {
  out << "name,param,trials,mean_ns,p50_ns,p95_ns\n";
  for (const auto& r : results) {
    out << r.name << ',' << r.param << ',' << r.trials << ',' << r.mean_ns << ','
        << r.p50_ns << ',' << r.p95_ns << '\n';
  }
}

}  // namespace provipc
