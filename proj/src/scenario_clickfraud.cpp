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
#include "provipc/scenario_clickfraud.hpp"

#include "provipc/encoding.hpp"
#include "provipc/error.hpp"

namespace provipc {
namespace {

constexpr std::uint32_t kHostUid = 10011;
constexpr std::uint32_t kAdUid = 10012;

struct SignedFields {
  std::int32_t x, y;
  std::uint64_t event_time;
  bool obscured;
};

std::optional<SignedFields> decode_fields(ByteView in) {
  try {
    Decoder dec(in);
    SignedFields f;
    f.x = static_cast<std::int32_t>(dec.u32());
    f.y = static_cast<std::int32_t>(dec.u32());
    f.event_time = dec.u64();
    std::uint8_t o = dec.u8();
    if (o > 1) return std::nullopt;
    f.obscured = o == 1;
    dec.expect_end();
    return f;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string describe(const InputEvent& ev) {
  return "(" + std::to_string(ev.x) + "," + std::to_string(ev.y) + ") t=" +
         std::to_string(ev.event_time) + (ev.obscured ? " obscured" : "");
}

// Events travel between apps as a statement; the fields are recovered from
// the signed bytes, not sent alongside them.
InputEvent event_from(const Statement& s) {
  InputEvent ev;
  ev.statement = s;
  if (auto f = decode_fields(s.message.payload)) {
    ev.x = f->x;
    ev.y = f->y;
    ev.event_time = f->event_time;
    ev.obscured = f->obscured;
  }
  return ev;
}

}  // namespace

Bytes encode_event_fields(std::int32_t x, std::int32_t y,
                          std::uint64_t event_time, bool obscured) {
  return Encoder()
      .u32(static_cast<std::uint32_t>(x))
      .u32(static_cast<std::uint32_t>(y))
      .u64(event_time)
      .u8(obscured ? 1 : 0)
      .take();
}

Message event_message(std::int32_t x, std::int32_t y, std::uint64_t event_time,
                      bool obscured) {
  return Message{std::string(kMotionMethod),
                 encode_event_fields(x, y, event_time, obscured), event_time};
}

InputService::InputService(Bus& bus)
    : bus_(bus),
      handle_(bus.spawn(std::string(kInputService), kInputServiceUid, {})) {}

InputEvent InputService::emit_event(std::int32_t x, std::int32_t y,
                                    std::uint64_t event_time, bool obscured) {
  return InputEvent{x, y, event_time, obscured,
                    bus_.make_statement(handle_,
                                        event_message(x, y, event_time, obscured))};
}

std::string_view to_string(ClickVerdict v) {
  switch (v) {
    case ClickVerdict::kAccept: return "Accept";
    case ClickVerdict::kRejectForged: return "RejectForged";
    case ClickVerdict::kRejectObscured: return "RejectObscured";
    case ClickVerdict::kRejectStale: return "RejectStale";
    case ClickVerdict::kRejectDuplicate: return "RejectDuplicate";
  }
  return "?";
}

ClickVerdict ad_validate(const InputEvent& ev, Verdict signature,
                         const Principal& input_service, std::uint64_t now,
                         std::uint64_t freshness_ms) {
  // The event's fields must be exactly what the input service signed.
  if (signature != Verdict::kValid || ev.statement.speaker != input_service ||
      ev.statement.message.method != kMotionMethod ||
      ev.statement.message.payload !=
          encode_event_fields(ev.x, ev.y, ev.event_time, ev.obscured)) {
    return ClickVerdict::kRejectForged;
  }
  if (ev.obscured) return ClickVerdict::kRejectObscured;
  if (now > ev.event_time && now - ev.event_time > freshness_ms) {
    return ClickVerdict::kRejectStale;
  }
  return ClickVerdict::kAccept;
}

ClickVerdict AdValidator::validate(const InputEvent& ev, Verdict signature,
                                   std::uint64_t now) {
  ClickVerdict v = ad_validate(ev, signature, input_service_, now, freshness_ms_);
  if (v != ClickVerdict::kAccept) return v;
  std::lock_guard lock(mu_);
  // Anything older than the window is rejected as stale anyway.
  std::erase_if(seen_, [&](const Key& k) {
    return now > std::get<0>(k) && now - std::get<0>(k) > freshness_ms_;
  });
  if (!seen_.emplace(ev.event_time, ev.x, ev.y, ev.statement.tag.bytes).second) {
    return ClickVerdict::kRejectDuplicate;
  }
  return ClickVerdict::kAccept;
}

ClickAttack parse_click_attack(std::string_view name) {
  if (name == "none") return ClickAttack::kNone;
  if (name == "synthesize") return ClickAttack::kSynthesize;
  if (name == "replay") return ClickAttack::kReplay;
  if (name == "obscure") return ClickAttack::kObscure;
  throw Error(ErrorCode::kConfigError, "unknown attack '" + std::string(name) + "'");
}

ClickTranscript run_clickfraud(ClickAttack attack, const ScenarioOptions& options) {
  ClickTranscript t;
  try {
    ScenarioNetwork net(options, [&t](const ServerView& view) {
      bool names_apps =
          view.chain.size() >= 2 && view.chain.back() == "AdApp" &&
          view.chain[view.chain.size() - 2] == "HostApp";
      bool from_input = view.statements.size() == 1 &&
                        view.statements[0].speaker_name == kInputService;
      if (!names_apps || !from_input) {
        return RpcResponse{403, {}};
      }
      ++t.credited_clicks;
      std::string body = "click credited";
      return RpcResponse{200, Bytes(body.begin(), body.end())};
    });
    Bus& bus = net.bus();
    ManualClock clock(1'000'000);
    InputService input(bus);
    AdValidator validator(input.handle().principal(), options.freshness_ms);

    bus.spawn("AdApp", kAdUid, {}, [&](const ProcessHandle& self,
                                       const CallContext& ctx, const Message&) {
      if (ctx.statements.size() != 1) return Reply{};
      InputEvent ev = event_from(ctx.statements[0]);
      Verdict sig = authority_client::verify(bus, self, ctx.statements).at(0);
      ClickVerdict v = validator.validate(ev, sig, clock.now_ms());
      t.verdicts.push_back(v);
      t.note("[AdApp] signature " + std::string(to_string(sig)) + ", event " +
             describe(ev) + ", now=" + std::to_string(clock.now_ms()) + " -> " +
             std::string(to_string(v)));
      if (v != ClickVerdict::kAccept) return Reply{};
      RpcResponse r = net_client::rpc(bus, self, kAdServerUrl,
                                      ctx.statements[0].message.payload,
                                      ctx.statements);
      t.note("[AdApp -> " + std::string(NetworkProvider::kServiceName) +
             "] click report: server answered " + std::to_string(r.status));
      return Reply{};
    });
    auto host = bus.spawn("HostApp", kHostUid, {}, [&](const ProcessHandle& self,
                                                       const CallContext& ctx,
                                                       const Message& msg) {
      t.note("[HostApp -> AdApp] relays " + msg.method);
      return bus.call(self, "AdApp", msg, ChainMode::kPropagate, ctx.statements);
    });

    auto deliver = [&](const InputEvent& ev) {
      t.note("[" + std::string(kInputService) + " -> HostApp] touch " + describe(ev));
      bus.call(input.handle(), "HostApp", Message{"touch", {}, clock.now_ms()},
               ChainMode::kPropagate, {ev.statement});
    };

    clock.advance(16);
    switch (attack) {
      case ClickAttack::kNone:
        deliver(input.emit_event(120, 480, clock.now_ms(), false));
        break;
      case ClickAttack::kObscure:
        deliver(input.emit_event(120, 480, clock.now_ms(), true));
        break;
      case ClickAttack::kReplay: {
        InputEvent ev = input.emit_event(120, 480, clock.now_ms(), false);
        deliver(ev);
        clock.advance(options.freshness_ms + 1500);
        t.note("[HostApp] (malicious) replays the earlier click");
        bus.call(host, "AdApp", Message{"touch", {}, clock.now_ms()},
                 ChainMode::kPropagate, {ev.statement});
        break;
      }
      case ClickAttack::kSynthesize: {
        t.note("[HostApp] (malicious) synthesizes a click");
        Statement fake =
            bus.make_statement(host, event_message(120, 480, clock.now_ms(), false));
        bus.call(host, "AdApp", Message{"touch", {}, clock.now_ms()},
                 ChainMode::kPropagate, {fake});
        break;
      }
    }
    net.collect(t);
  } catch (const std::exception& e) {
    t.note(std::string("[scenario] error: ") + e.what());
    t.expected = false;
    return t;
  }

  using V = std::vector<ClickVerdict>;
  switch (attack) {
    case ClickAttack::kNone:
      t.expected = t.verdicts == V{ClickVerdict::kAccept} && t.credited_clicks == 1;
      break;
    case ClickAttack::kSynthesize:
      t.expected = t.verdicts == V{ClickVerdict::kRejectForged} && t.frames_sent == 0;
      break;
    case ClickAttack::kObscure:
      t.expected = t.verdicts == V{ClickVerdict::kRejectObscured} && t.frames_sent == 0;
      break;
    case ClickAttack::kReplay:
      t.expected = t.verdicts == V{ClickVerdict::kAccept, ClickVerdict::kRejectStale} &&
                   t.credited_clicks == 1 && t.frames_sent == 1;
      break;
  }
  return t;
}

}  // namespace provipc
