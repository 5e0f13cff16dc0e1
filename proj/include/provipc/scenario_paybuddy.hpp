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

// Micropayments. ExampleApp signs a purchase order and hands it to PayBuddy;
// the user approves (or not); PayBuddy asks the network provider to submit
// it to the PayBuddy.com test server, which learns from the attested request
// that the order came from a particular device, originated unmodified in
// ExampleApp, and passed through PayBuddy.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "provipc/scenario.hpp"

namespace provipc {

struct PurchaseOrder {
  std::string order_id;
  std::uint64_t amount_cents = 0;
  std::string merchant;
  std::string description;

  bool operator==(const PurchaseOrder&) const = default;
};

Bytes encode(const PurchaseOrder& order);
PurchaseOrder decode_purchase_order(ByteView in);  // kMalformedEncoding

struct PaymentDecision {
  bool approved = false;
  Principal decided_by;

  bool operator==(const PaymentDecision&) const = default;
};

Bytes encode(const PaymentDecision& decision);
PaymentDecision decode_payment_decision(ByteView in);

enum class PayBuddyTamper : std::uint8_t {
  kNone,
  // PayBuddy raises the amount in the signed order before forwarding it.
  kMutateOrder,
  // PayBuddy submits the same signed order twice.
  kReplayOrder,
};

PayBuddyTamper parse_paybuddy_tamper(std::string_view name);  // kConfigError

enum class PayBuddyOutcome : std::uint8_t {
  kPaid,
  kCancelled,
  kStatementRejected,  // on the device, by the network provider
  kReplayRejected,     // on the server, by the order_id ledger
  kFailed,
};

std::string_view to_string(PayBuddyOutcome outcome);

inline constexpr std::string_view kPayBuddyUrl = "https://paybuddy.example/pay";
inline constexpr std::string_view kOrderMethod = "purchase_order";

struct PayBuddyTranscript : Transcript {
  PayBuddyOutcome outcome = PayBuddyOutcome::kFailed;
  PurchaseOrder order;
  std::optional<PaymentDecision> decision;
  // PayBuddy's own check of ExampleApp's statement, via the authority.
  std::vector<Verdict> verdicts;
  std::vector<RpcResponse> responses;
};

/// Runs the whole flow; errors land in the transcript, never thrown.
PayBuddyTranscript run_paybuddy(bool approve, PayBuddyTamper tamper,
                                const ScenarioOptions& options = {});

}  // namespace provipc
