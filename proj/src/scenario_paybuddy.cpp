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
#include "provipc/scenario_paybuddy.hpp"

#include <set>

#include "provipc/encoding.hpp"
#include "provipc/error.hpp"

namespace provipc {
namespace {

constexpr std::uint32_t kExampleUid = 10001;
constexpr std::uint32_t kPayBuddyUid = 10002;
constexpr std::uint32_t kStatusReplay = 409;
constexpr std::uint32_t kStatusRefused = 403;

std::string text(ByteView b) { return std::string(b.begin(), b.end()); }

RpcResponse respond(std::uint32_t status, std::string why) {
  return RpcResponse{status, Bytes(why.begin(), why.end())};
}

// PayBuddy.com: trusts the attestation, insists on the expected provenance,
// and refuses order ids it has already charged.
class PayBuddyServer {
 public:
  RpcResponse operator()(const ServerView& view) {
    if (view.chain != std::vector<std::string>{"ExampleApp", "PayBuddy"}) {
      return respond(kStatusRefused, "unexpected chain");
    }
    if (view.statements.size() != 1 ||
        view.statements[0].speaker_name != view.chain.front() ||
        view.statements[0].message.method != kOrderMethod) {
      return respond(kStatusRefused, "no order from the originating app");
    }
    PurchaseOrder order;
    PaymentDecision decision;
    try {
      order = decode_purchase_order(view.statements[0].message.payload);
      decision = decode_payment_decision(view.payload);
    } catch (const Error&) {
      return respond(kStatusRefused, "unreadable order");
    }
    if (!decision.approved) return respond(kStatusRefused, "not approved");
    if (!seen_.insert(order.order_id).second) {
      return respond(kStatusReplay, "order " + order.order_id + " already paid");
    }
    return respond(200, "paid " + order.order_id);
  }

 private:
  std::set<std::string> seen_;
};

}  // namespace

Bytes encode(const PurchaseOrder& order) {
  return Encoder()
      .str(order.order_id)
      .u64(order.amount_cents)
      .str(order.merchant)
      .str(order.description)
      .take();
}

PurchaseOrder decode_purchase_order(ByteView in) {
  Decoder dec(in);
  PurchaseOrder order;
  order.order_id = dec.str();
  order.amount_cents = dec.u64();
  order.merchant = dec.str();
  order.description = dec.str();
  dec.expect_end();
  return order;
}

Bytes encode(const PaymentDecision& decision) {
  return Encoder().u8(decision.approved ? 1 : 0).principal(decision.decided_by).take();
}

PaymentDecision decode_payment_decision(ByteView in) {
  Decoder dec(in);
  PaymentDecision d;
  std::uint8_t flag = dec.u8();
  if (flag > 1) throw Error(ErrorCode::kMalformedEncoding, "bad approval flag");
  d.approved = flag == 1;
  d.decided_by = dec.principal();
  dec.expect_end();
  return d;
}

PayBuddyTamper parse_paybuddy_tamper(std::string_view name) {
  if (name == "none") return PayBuddyTamper::kNone;
  if (name == "mutate") return PayBuddyTamper::kMutateOrder;
  if (name == "replay") return PayBuddyTamper::kReplayOrder;
  throw Error(ErrorCode::kConfigError, "unknown tamper '" + std::string(name) + "'");
}

std::string_view to_string(PayBuddyOutcome outcome) {
  switch (outcome) {
    case PayBuddyOutcome::kPaid: return "Paid";
    case PayBuddyOutcome::kCancelled: return "Cancelled";
    case PayBuddyOutcome::kStatementRejected: return "StatementRejected";
    case PayBuddyOutcome::kReplayRejected: return "ReplayRejected";
    case PayBuddyOutcome::kFailed: return "Failed";
  }
  return "?";
}

PayBuddyTranscript run_paybuddy(bool approve, PayBuddyTamper tamper,
                                const ScenarioOptions& options) {
  PayBuddyTranscript t;
  try {
    ScenarioNetwork net(options, PayBuddyServer{});
    Bus& bus = net.bus();
    ManualClock clock(1'700'000'000'000);

    bus.spawn("PayBuddy", kPayBuddyUid, {}, [&](const ProcessHandle& self,
                                                const CallContext& ctx,
                                                const Message&) {
      t.verdicts = authority_client::verify(bus, self, ctx.statements);
      for (std::size_t i = 0; i < t.verdicts.size(); ++i) {
        t.note("[PayBuddy] checks statement " + std::to_string(i) + " via " +
               std::string(Bus::kAuthorityService) + ": " +
               std::string(to_string(t.verdicts[i])));
      }
      if (ctx.statements.size() != 1 || t.verdicts[0] != Verdict::kValid) {
        t.note("[PayBuddy] refuses: order not verifiable");
        return Reply{};
      }
      PurchaseOrder order = decode_purchase_order(ctx.statements[0].message.payload);
      t.note("[PayBuddy] asks user to confirm " + order.order_id + " for " +
             std::to_string(order.amount_cents) + " cents to " + order.merchant);
      t.decision = PaymentDecision{approve, self.principal()};
      if (!approve) {
        t.note("[PayBuddy] user cancelled; nothing sent");
        return Reply{};
      }
      t.note("[PayBuddy] user approved");

      std::vector<Statement> forwarded = ctx.statements;
      if (tamper == PayBuddyTamper::kMutateOrder) {
        order.amount_cents *= 100;
        forwarded[0].message.payload = encode(order);
        t.note("[PayBuddy] (compromised) raises amount to " +
               std::to_string(order.amount_cents));
      }
      int submissions = tamper == PayBuddyTamper::kReplayOrder ? 2 : 1;
      for (int i = 0; i < submissions; ++i) {
        t.note("[PayBuddy -> " + std::string(NetworkProvider::kServiceName) +
               "] rpc " + std::string(kPayBuddyUrl) +
               (i > 0 ? " (replayed)" : ""));
        try {
          RpcResponse r = net_client::rpc(bus, self, kPayBuddyUrl,
                                          encode(*t.decision), forwarded);
          t.note("[PayBuddy] server answered " + std::to_string(r.status) +
                 " " + text(r.body));
          t.responses.push_back(std::move(r));
        } catch (const Error& e) {
          t.note("[" + std::string(NetworkProvider::kServiceName) +
                 "] refused: " + e.what());
          if (e.code() == ErrorCode::kStatementVerificationFailed) {
            t.outcome = PayBuddyOutcome::kStatementRejected;
          }
          return Reply{};
        }
      }
      return Reply{};
    });
    auto example = bus.spawn("ExampleApp", kExampleUid, {});

    t.order = PurchaseOrder{"order-" + std::to_string(options.seed), 1999,
                            "ExampleApp", "Premium level pack"};
    Message order_msg{std::string(kOrderMethod), encode(t.order), clock.now_ms()};
    Statement signed_order = bus.make_statement(example, order_msg);
    t.note("[ExampleApp] signs " + std::string(kOrderMethod) + " " +
           t.order.order_id + " (" + std::to_string(t.order.amount_cents) +
           " cents)");
    t.note("[ExampleApp -> PayBuddy] pay, quoting its signed order");
    bus.call(example, "PayBuddy", Message{"pay", {}, clock.now_ms()},
             ChainMode::kPropagate, {signed_order});

    net.collect(t);
    for (const auto& view : t.server_views) {
      t.note("[server] device " + view.device_id + " attests chain [" +
             encode_chain_header({view.chain}) + "]");
    }
  } catch (const std::exception& e) {
    t.note(std::string("[scenario] error: ") + e.what());
    t.outcome = PayBuddyOutcome::kFailed;
    t.expected = false;
    return t;
  }

  if (t.outcome != PayBuddyOutcome::kStatementRejected) {
    if (!t.decision || !t.decision->approved) {
      t.outcome = t.decision ? PayBuddyOutcome::kCancelled : PayBuddyOutcome::kFailed;
    } else if (t.responses.size() == 2 && t.responses[0].status == 200 &&
               t.responses[1].status == kStatusReplay) {
      t.outcome = PayBuddyOutcome::kReplayRejected;
    } else if (t.responses.size() == 1 && t.responses[0].status == 200) {
      t.outcome = PayBuddyOutcome::kPaid;
    } else {
      t.outcome = PayBuddyOutcome::kFailed;
    }
  }

  PayBuddyOutcome want = !approve ? PayBuddyOutcome::kCancelled
                         : tamper == PayBuddyTamper::kMutateOrder
                             ? PayBuddyOutcome::kStatementRejected
                         : tamper == PayBuddyTamper::kReplayOrder
                             ? PayBuddyOutcome::kReplayRejected
                             : PayBuddyOutcome::kPaid;
  bool silent = want == PayBuddyOutcome::kCancelled ||
                want == PayBuddyOutcome::kStatementRejected;
  t.expected = t.outcome == want && (!silent || t.frames_sent == 0);
  t.note("[scenario] result: " + std::string(to_string(t.outcome)));
  return t;
}

}  // namespace provipc
