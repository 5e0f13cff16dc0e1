#include "doctest.h"
#include "provipc/encoding.hpp"
#include "provipc/error.hpp"
#include "provipc/scenario_clickfraud.hpp"
#include "provipc/scenario_paybuddy.hpp"

using namespace provipc;

namespace {

ScenarioOptions with(TransportKind kind) {
  ScenarioOptions o;
  o.transport = kind;
  return o;
}

}  // namespace

TEST_CASE("paybuddy happy path establishes the three guarantees") {
  for (auto kind : {TransportKind::kMemory, TransportKind::kHttp}) {
    CAPTURE(to_string(kind));
    auto t = run_paybuddy(true, PayBuddyTamper::kNone, with(kind));
    INFO(t.render());
    CHECK(t.expected);
    CHECK(t.outcome == PayBuddyOutcome::kPaid);
    REQUIRE(t.server_views.size() == 1);
    const ServerView& v = t.server_views[0];
    // Came from a particular device.
    CHECK(v.device_id == "phone-1");
    // Originated from ExampleApp and was not tampered with.
    CHECK(v.chain.front() == "ExampleApp");
    REQUIRE(v.statements.size() == 1);
    CHECK(v.statements[0].speaker_name == "ExampleApp");
    CHECK(decode_purchase_order(v.statements[0].message.payload) == t.order);
    // PayBuddy approved.
    CHECK(v.chain == std::vector<std::string>{"ExampleApp", "PayBuddy"});
    PaymentDecision d = decode_payment_decision(v.payload);
    CHECK(d.approved);
    CHECK(d == *t.decision);
    CHECK(t.verdicts == std::vector<Verdict>{Verdict::kValid});
  }
}

TEST_CASE("paybuddy attacks are stopped where documented") {
  SUBCASE("mutated order never leaves the device") {
    auto t = run_paybuddy(true, PayBuddyTamper::kMutateOrder);
    INFO(t.render());
    CHECK(t.expected);
    CHECK(t.outcome == PayBuddyOutcome::kStatementRejected);
    CHECK(t.frames_sent == 0);
  }
  SUBCASE("replayed order is refused by the server ledger") {
    auto t = run_paybuddy(true, PayBuddyTamper::kReplayOrder);
    INFO(t.render());
    CHECK(t.expected);
    CHECK(t.outcome == PayBuddyOutcome::kReplayRejected);
    REQUIRE(t.responses.size() == 2);
    CHECK(t.responses[0].status == 200);
    CHECK(t.responses[1].status == 409);
    CHECK(t.frames_sent == 2);
  }
  SUBCASE("declining sends nothing") {
    for (auto tamper : {PayBuddyTamper::kNone, PayBuddyTamper::kMutateOrder,
                        PayBuddyTamper::kReplayOrder}) {
      auto t = run_paybuddy(false, tamper);
      CHECK(t.expected);
      CHECK(t.outcome == PayBuddyOutcome::kCancelled);
      CHECK(t.frames_sent == 0);
    }
  }
}

TEST_CASE("paybuddy transcript is deterministic for a seed") {
  ScenarioOptions o;
  o.seed = 42;
  CHECK(run_paybuddy(true, PayBuddyTamper::kNone, o).render() ==
        run_paybuddy(true, PayBuddyTamper::kNone, o).render());
}

TEST_CASE("orders and decisions round-trip") {
  PurchaseOrder o{"id", 5, "m", "d"};
  CHECK(decode_purchase_order(encode(o)) == o);
  PaymentDecision d{true, {3, 4}};
  CHECK(decode_payment_decision(encode(d)) == d);
  Bytes bad = encode(d);
  bad[0] = 2;
  CHECK_THROWS_AS(decode_payment_decision(bad), Error);
}

TEST_CASE("input events") {
  Bus bus;
  InputService input(bus);
  auto host = bus.spawn("HostApp", 10011, {});
  const Principal os = input.handle().principal();

  SUBCASE("emitted events verify") {
    auto ev = input.emit_event(-5, 7, 1000, false);
    CHECK(bus.authority().verify_statement(ev.statement) == Verdict::kValid);
    CHECK(ev.statement.message.payload == encode_event_fields(-5, 7, 1000, false));
  }
  SUBCASE("mutated payload fails") {
    auto ev = input.emit_event(1, 2, 3, false);
    for (std::size_t i = 0; i < ev.statement.message.payload.size(); ++i) {
      Statement s = ev.statement;
      s.message.payload[i] ^= 0x01;
      CHECK(bus.authority().verify_statement(s) == Verdict::kInvalidTag);
    }
  }
  SUBCASE("a burst of 60 gives 60 distinct valid statements") {
    std::set<Bytes> tags;
    for (int i = 0; i < 60; ++i) {
      auto ev = input.emit_event(i, i, 1000 + static_cast<std::uint64_t>(i) * 16, false);
      CHECK(bus.authority().verify_statement(ev.statement) == Verdict::kValid);
      tags.insert(ev.statement.tag.bytes);
    }
    CHECK(tags.size() == 60);
  }
  SUBCASE("validation order is signature, obscured, freshness") {
    const std::uint64_t w = 500;
    auto fresh = input.emit_event(1, 1, 10'000, false);
    auto covered = input.emit_event(1, 1, 10'000, true);
    InputEvent fake{1, 1, 10'000, true,
                    bus.make_statement(host, event_message(1, 1, 10'000, true))};
    auto v = [&](const InputEvent& e, std::uint64_t now) {
      return ad_validate(e, bus.authority().verify_statement(e.statement), os, now, w);
    };
    CHECK(v(fresh, 10'000) == ClickVerdict::kAccept);
    CHECK(v(fresh, 10'500) == ClickVerdict::kAccept);
    CHECK(v(fresh, 10'501) == ClickVerdict::kRejectStale);
    CHECK(v(covered, 10'000) == ClickVerdict::kRejectObscured);
    CHECK(v(covered, 99'999) == ClickVerdict::kRejectObscured);
    CHECK(v(fake, 10'000) == ClickVerdict::kRejectForged);
    CHECK(v(fake, 99'999) == ClickVerdict::kRejectForged);
    // Fields that disagree with the signed bytes are forgeries.
    InputEvent moved = fresh;
    moved.x = 2;
    CHECK(v(moved, 10'000) == ClickVerdict::kRejectForged);
    InputEvent uncovered = covered;
    uncovered.obscured = false;
    CHECK(v(uncovered, 10'000) == ClickVerdict::kRejectForged);
    // Right tag bytes, wrong claimed speaker.
    InputEvent spoofed = fake;
    spoofed.statement.speaker = os;
    CHECK(v(spoofed, 10'000) == ClickVerdict::kRejectForged);
  }
  SUBCASE("no event is accepted twice") {
    AdValidator validator(os, 500);
    auto ev = input.emit_event(4, 4, 2'000, false);
    auto sig = bus.authority().verify_statement(ev.statement);
    CHECK(validator.validate(ev, sig, 2'000) == ClickVerdict::kAccept);
    CHECK(validator.validate(ev, sig, 2'100) == ClickVerdict::kRejectDuplicate);
    CHECK(validator.validate(ev, sig, 2'600) == ClickVerdict::kRejectStale);
    auto next = input.emit_event(4, 4, 2'001, false);
    CHECK(validator.validate(next, bus.authority().verify_statement(next.statement),
                             2'100) == ClickVerdict::kAccept);
  }
}

TEST_CASE("click fraud end to end") {
  for (auto kind : {TransportKind::kMemory, TransportKind::kHttp}) {
    CAPTURE(to_string(kind));
    auto ok = run_clickfraud(ClickAttack::kNone, with(kind));
    INFO(ok.render());
    CHECK(ok.expected);
    REQUIRE(ok.server_views.size() == 1);
    CHECK(ok.server_views[0].chain ==
          std::vector<std::string>{"InputService", "HostApp", "AdApp"});
    CHECK(ok.server_views[0].statements.at(0).speaker_name == "InputService");
  }
  auto synth = run_clickfraud(ClickAttack::kSynthesize);
  CHECK(synth.expected);
  CHECK(synth.verdicts == std::vector<ClickVerdict>{ClickVerdict::kRejectForged});
  CHECK(synth.frames_sent == 0);

  auto obscured = run_clickfraud(ClickAttack::kObscure);
  CHECK(obscured.expected);
  CHECK(obscured.verdicts == std::vector<ClickVerdict>{ClickVerdict::kRejectObscured});

  auto replay = run_clickfraud(ClickAttack::kReplay);
  INFO(replay.render());
  CHECK(replay.expected);
  CHECK(replay.verdicts ==
        std::vector<ClickVerdict>{ClickVerdict::kAccept, ClickVerdict::kRejectStale});
  CHECK(replay.credited_clicks == 1);
}
