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

// Microbenchmarks. Every sweep is one discarded priming run followed by
// `runs` runs of `trials` trials; within a trial every point of the sweep is
// timed once, so drift hits all points alike. A run is summarized by its
// median; mean_ns is the mean of the middle runs (all but the fastest and
// slowest) and p50_ns/p95_ns are over all pooled trials.
//
// CSV columns: name,param,trials,mean_ns,p50_ns,p95_ns

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "provipc/types.hpp"

namespace provipc {

struct BenchResult {
  std::string name;
  std::uint64_t param = 0;  // payload bytes or chain depth
  std::uint32_t trials = 0;
  std::uint64_t mean_ns = 0;
  std::uint64_t p50_ns = 0;
  std::uint64_t p95_ns = 0;
};

struct BenchOptions {
  std::uint32_t runs = 10;
  std::uint32_t trials = 100;
  // IPC round trips are a few hundred ns against a ~40 ns overhead, so a
  // 100-trial run is too short to resolve on/off reliably.
  std::uint32_t ipc_trials = 1000;
  // Payload bytes are drawn from a generator seeded with this.
  std::uint64_t seed = 1;
  MacAlgorithm algorithm = MacAlgorithm::kHmacSha1;
};

std::vector<std::uint64_t> statement_sizes();  // 10 .. 8000
std::vector<std::uint64_t> ipc_sizes();        // 0 .. 6336 step 64
std::vector<std::uint32_t> resolution_depths();  // 1, 2, 4, 8
std::vector<std::uint64_t> rpc_sizes();

/// Seeded payload for one benchmark point.
Bytes bench_payload(std::uint64_t seed, std::uint64_t size);

/// "statement_create" (local signing) and "statement_verify" (a round trip to
/// the authority service) per size.
std::vector<BenchResult> bench_statements(const std::vector<std::uint64_t>& sizes,
                                          const BenchOptions& options = {});

/// "ipc_<hops>hop_on" and "ipc_<hops>hop_off" per size against no-op echo
/// services.
std::vector<BenchResult> bench_ipc(const std::vector<std::uint64_t>& sizes,
                                   int hops, const BenchOptions& options = {});
/// One side of the above.
std::vector<BenchResult> bench_ipc(const std::vector<std::uint64_t>& sizes,
                                   int hops, bool provenance,
                                   const BenchOptions& options = {});

/// "resolution" per depth: resolve_chain plus a verify batch of one
/// statement per link, both over IPC.
std::vector<BenchResult> bench_resolution(const std::vector<std::uint32_t>& depths,
                                          const BenchOptions& options = {});

/// "rpc_attested" and "rpc_plain" per size over the in-memory transport.
std::vector<BenchResult> bench_rpc(const std::vector<std::uint64_t>& sizes,
                                   const BenchOptions& options = {});

void write_csv(std::ostream& out, const std::vector<BenchResult>& results);

}  // namespace provipc
