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

// Click fraud. The OS input service signs every motion event; a host app
// relays clicks to an embedded ad app, which accepts one only if the
// signature is the input service's, the ad was not obscured, and the event
// is fresh, in that order. Accepted clicks are reported to the ad server
// through the network provider.

#include <cstdint>
#include <mutex>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "provipc/scenario.hpp"

namespace provipc {

inline constexpr std::string_view kInputService = "InputService";
inline constexpr std::uint32_t kInputServiceUid = 1002;
inline constexpr std::string_view kMotionMethod = "motion_event";
inline constexpr std::string_view kAdServerUrl = "https://ads.example/click";

struct InputEvent {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::uint64_t event_time = 0;
  bool obscured = false;
  Statement statement;
};

/// The bytes an event's statement covers.
Bytes encode_event_fields(std::int32_t x, std::int32_t y,
                          std::uint64_t event_time, bool obscured);
Message event_message(std::int32_t x, std::int32_t y, std::uint64_t event_time,
                      bool obscured);

// The distinguished OS-input principal.
class InputService {
 public:
  explicit InputService(Bus& bus);

  InputEvent emit_event(std::int32_t x, std::int32_t y,
                        std::uint64_t event_time, bool obscured);
  const ProcessHandle& handle() const { return handle_; }

 private:
  Bus& bus_;
  ProcessHandle handle_;
};

enum class ClickVerdict : std::uint8_t {
  kAccept,
  kRejectForged,
  kRejectObscured,
  kRejectStale,
  // Same genuine event seen before within the freshness window.
  kRejectDuplicate,
};

std::string_view to_string(ClickVerdict v);

/// Signature, then obscured flag, then freshness; the first failure wins.
/// `signature` is the authority's verdict on ev.statement.
ClickVerdict ad_validate(const InputEvent& ev, Verdict signature,
                         const Principal& input_service, std::uint64_t now,
                         std::uint64_t freshness_ms);

// ad_validate plus a seen-set, so no event is accepted twice.
class AdValidator {
 public:
  AdValidator(Principal input_service, std::uint64_t freshness_ms)
      : input_service_(input_service), freshness_ms_(freshness_ms) {}

  ClickVerdict validate(const InputEvent& ev, Verdict signature,
                        std::uint64_t now);

 private:
  using Key = std::tuple<std::uint64_t, std::int32_t, std::int32_t, Bytes>;

  const Principal input_service_;
  const std::uint64_t freshness_ms_;
  std::mutex mu_;
  std::set<Key> seen_;
};

enum class ClickAttack : std::uint8_t {
  kNone,
  // The host fabricates an event and signs it with its own key.
  kSynthesize,
  // The host re-sends a genuine event after the freshness window.
  kReplay,
  // The ad was covered when the user clicked.
  kObscure,
};

ClickAttack parse_click_attack(std::string_view name);  // kConfigError

struct ClickTranscript : Transcript {
  std::vector<ClickVerdict> verdicts;
  std::size_t credited_clicks = 0;
};

/// InputService -> HostApp -> AdApp -> NetworkProvider -> ad server.
/// Errors land in the transcript, never thrown.
ClickTranscript run_clickfraud(ClickAttack attack,
                               const ScenarioOptions& options = {});

}  // namespace provipc
