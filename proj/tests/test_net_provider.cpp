#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "provipc/encoding.hpp"
#include "provipc/error.hpp"
#include "provipc/http_transport.hpp"
#include "provipc/net_provider.hpp"
#include "test_support.hpp"

using namespace provipc;
using provipc::testing::Gen;

namespace {

struct Rig {
  Bus bus;
  DeviceCredential device =
      DeviceCredential::manufacture("phone-0001", MacAlgorithm::kHmacSha1);
  std::shared_ptr<RemoteServer> server;
  std::shared_ptr<InMemoryTransport> transport;
  std::unique_ptr<NetworkProvider> provider;

  Rig() {
    TrustStore trust;
    trust.endorse(device);
    server = std::make_shared<RemoteServer>(std::move(trust), nullptr);
    transport = std::make_shared<InMemoryTransport>(server);
    provider = std::make_unique<NetworkProvider>(bus, device, transport);
  }
};

Bytes bytes_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

TrustStore trust_of(const DeviceCredential& device) {
  TrustStore t;
  t.endorse(device);
  return t;
}

ServerView accepted(const VerifyResult& r) {
  REQUIRE(std::holds_alternative<ServerView>(r));
  return std::get<ServerView>(r);
}

Rejection rejected(const VerifyResult& r) {
  REQUIRE(std::holds_alternative<Rejection>(r));
  return std::get<Rejection>(r);
}

}  // namespace

TEST_CASE("two-hop request carries originator-first chain and restated statements") {
  Rig rig;
  Message order{"purchase_order", bytes_of("order-1:1999"), 1};
  auto example = rig.bus.spawn("ExampleApp", 2001, {});
  rig.bus.spawn("PayBuddy", 2002, {},
                [&](const ProcessHandle& self, const CallContext& ctx,
                    const Message& msg) {
                  auto r = net_client::rpc(rig.bus, self, "https://paybuddy.example/pay",
                                           msg.payload, ctx.statements);
                  return Reply{Bytes(1, static_cast<std::uint8_t>(r.status == 200))};
                });
  Statement s = rig.bus.make_statement(example, order);
  Reply reply = rig.bus.call(example, "PayBuddy", order, ChainMode::kPropagate, {s});
  CHECK(reply.payload == Bytes{1});
  REQUIRE(rig.transport->frames_sent() == 1);

  ServerView view = accepted(server_verify(rig.transport->last_frame(),
                                           trust_of(rig.device)));
  CHECK(view.device_id == "phone-0001");
  CHECK(view.chain == std::vector<std::string>{"ExampleApp", "PayBuddy"});
  REQUIRE(view.statements.size() == 1);
  CHECK(view.statements[0].speaker_name == "ExampleApp");
  CHECK(view.statements[0].message == order);
  CHECK(view.statements[0].tag == s.tag);

  WireRequest wire = decode_frame(rig.transport->last_frame());
  CHECK(wire.headers[0] ==
        std::pair<std::string, std::string>{"X-Provenance-Chain", "ExampleApp,PayBuddy"});
  CHECK(wire.headers[1].first == "X-Provenance-Statements");
  CHECK(rig.server->log().at(0).starts_with("ACCEPT device=phone-0001"));
}

TEST_CASE("tampered statement aborts before anything is sent") {
  Rig rig;
  auto app = rig.bus.spawn("App", 2001, {});
  Message m{"m", bytes_of("x"), 0};
  Statement good = rig.bus.make_statement(app, m);
  Statement bad = good;
  bad.message.payload[0] ^= 1;
  for (auto statements : {std::vector<Statement>{bad, good},
                          std::vector<Statement>{good, bad}}) {
    std::size_t expected = statements[0] == bad ? 0 : 1;
    try {
      net_client::rpc(rig.bus, app, "u", {}, statements);
      FAIL("expected StatementVerificationFailed");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kStatementVerificationFailed);
      CHECK(e.index() == expected);
    }
  }
  Statement unknown = good;
  unknown.speaker = Principal{4242, 1};
  try {
    net_client::rpc(rig.bus, app, "u", {}, {unknown});
    FAIL("expected StatementVerificationFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStatementVerificationFailed);
  }
  CHECK(rig.transport->frames_sent() == 0);
}

TEST_CASE("minimal request carries just the caller") {
  Rig rig;
  auto a = rig.bus.spawn("A", 2001, {});
  RpcResponse r = net_client::rpc(rig.bus, a, "https://x/", bytes_of("hi"));
  CHECK(r.status == 200);
  ServerView view = accepted(server_verify(rig.transport->last_frame(),
                                           trust_of(rig.device)));
  CHECK(view.chain == std::vector<std::string>{"A"});
  CHECK(view.statements.empty());
  CHECK(view.url == "https://x/");
  CHECK(view.payload == bytes_of("hi"));
}

TEST_CASE("app-built requests are rejected as impersonation") {
  Rig rig;
  TrustStore trust = trust_of(rig.device);
  auto a = rig.bus.spawn("A", 2001, {});
  net_client::rpc(rig.bus, a, "u", bytes_of("p"));
  WireRequest genuine = decode_frame(rig.transport->last_frame());
  CHECK(std::holds_alternative<ServerView>(server_verify(genuine, trust)));

  for (int i = 0; i < 200; ++i) {
    WireRequest forged = genuine;
    forged.headers[0].second = "BankApp";
    // The app's best guesses at a key: fresh random keys, or its own
    // statement key's MAC over the same bytes.
    if (i % 2 == 0) {
      forged.evidence =
          mac_create(keygen(MacAlgorithm::kHmacSha1), signed_body(forged));
    } else {
      forged.evidence = rig.bus.make_statement(a, Message{"", signed_body(forged), 0}).tag;
    }
    CHECK(rejected(server_verify(forged, trust)) == Rejection::kBadChannelAuth);
  }
  // Replaying genuine evidence over edited headers fails too.
  WireRequest edited = genuine;
  edited.headers[0].second = "A,Other";
  CHECK(rejected(server_verify(edited, trust)) == Rejection::kBadChannelAuth);
  // Unknown device.
  CHECK(rejected(server_verify(genuine, TrustStore{})) == Rejection::kBadChannelAuth);
}

TEST_CASE("truncated or corrupted frames are malformed") {
  Rig rig;
  TrustStore trust = trust_of(rig.device);
  auto a = rig.bus.spawn("A", 2001, {});
  auto b = rig.bus.spawn("B", 2002, {});
  Statement s = rig.bus.make_statement(b, Message{"m", bytes_of("abc"), 9});
  net_client::rpc(rig.bus, a, "u", bytes_of("payload"), {s});
  Bytes frame = rig.transport->last_frame();
  for (std::size_t n = 0; n < frame.size(); ++n) {
    Bytes cut(frame.begin(), frame.begin() + static_cast<std::ptrdiff_t>(n));
    CHECK(rejected(server_verify(cut, trust)) == Rejection::kMalformedHeader);
  }
  Bytes longer = frame;
  longer.push_back(0);
  CHECK(rejected(server_verify(longer, trust)) == Rejection::kMalformedHeader);

  // Correctly authenticated but unparseable headers are still malformed.
  // The test holds this key itself, standing in for a provider bug.
  SecretKey k = keygen(MacAlgorithm::kHmacSha1);
  TrustStore own;
  own.add("phone-0001", k);
  auto check_malformed = [&](WireRequest w) {
    w.evidence = mac_create(k, signed_body(w));
    CHECK(rejected(server_verify(w, own)) == Rejection::kMalformedHeader);
  };
  WireRequest wire = decode_frame(frame);
  {
    WireRequest w = wire;
    w.evidence = mac_create(k, signed_body(w));
    CHECK(std::holds_alternative<ServerView>(server_verify(w, own)));
  }
  for (std::string chain : {"A,", ",A", "A,,B", ""}) {
    WireRequest w = wire;
    w.headers[0].second = chain;
    if (chain.empty()) continue;  // empty chain header is a valid empty list
    check_malformed(w);
  }
  const std::string& hex = wire.headers[1].second;
  for (std::size_t n = 0; n < hex.size(); ++n) {
    WireRequest w = wire;
    w.headers[1].second = hex.substr(0, n);
    check_malformed(w);
  }
  {
    WireRequest w = wire;
    w.headers[1].second = "zz";
    check_malformed(w);
  }
  {
    WireRequest w = wire;
    w.headers.pop_back();
    check_malformed(w);
  }
  {
    WireRequest w = wire;
    w.headers.push_back(w.headers[0]);
    check_malformed(w);
  }
}

TEST_CASE("payload bytes never become headers") {
  Rig rig;
  TrustStore trust = trust_of(rig.device);
  auto evil = rig.bus.spawn("EvilApp", 2001, {});
  std::string injected =
      "\r\nX-Provenance-Chain: BankApp\r\nX-Provenance-Statements: 00\r\n\r\n";
  net_client::rpc(rig.bus, evil, "u\r\nX-Provenance-Chain: BankApp",
                  bytes_of(injected));
  ServerView view = accepted(server_verify(rig.transport->last_frame(), trust));
  CHECK(view.chain == std::vector<std::string>{"EvilApp"});
  CHECK(view.payload == bytes_of(injected));
  CHECK(view.url == "u\r\nX-Provenance-Chain: BankApp");
}

TEST_CASE("server view reproduces the on-device provenance") {
  Rig rig;
  TrustStore trust = trust_of(rig.device);
  Gen gen(11);
  std::vector<ProcessHandle> apps;
  for (std::uint32_t i = 0; i < 6; ++i) {
    apps.push_back(rig.bus.spawn("App" + std::to_string(i), 3000 + i, {}));
  }
  for (int trial = 0; trial < 200; ++trial) {
    auto& caller = apps[gen.below(apps.size())];
    std::vector<Statement> statements;
    std::vector<AttestedStatement> expected;
    for (std::size_t k = gen.below(4); k > 0; --k) {
      auto& speaker = apps[gen.below(apps.size())];
      Message m = gen.message();
      statements.push_back(rig.bus.make_statement(speaker, m));
      expected.push_back({speaker.name(), m, statements.back().tag});
    }
    Bytes payload = gen.bytes(64);
    net_client::rpc(rig.bus, caller, "u", payload, statements);
    ServerView view = accepted(server_verify(rig.transport->last_frame(), trust));
    CHECK(view.chain == std::vector<std::string>{caller.name()});
    CHECK(view.statements == expected);
    CHECK(view.payload == payload);
  }
}

TEST_CASE("credentials and trust stores round-trip through files") {
  auto dir = std::filesystem::temp_directory_path() / "provipc_test_np";
  std::filesystem::create_directories(dir);
  auto cred_path = (dir / "device.key").string();
  auto trust_path = (dir / "trust.txt").string();
  auto dev = DeviceCredential::manufacture("d1", MacAlgorithm::kHmacSha256);
  dev.save(cred_path);
  auto loaded = DeviceCredential::load(cred_path);
  CHECK(loaded.device_id() == "d1");
  TrustStore t;
  t.endorse(loaded);
  t.save(trust_path);
  TrustStore t2 = TrustStore::load(trust_path);
  REQUIRE(t2.find("d1") != nullptr);
  CHECK(*t2.find("d1") == *trust_of(dev).find("d1"));
  CHECK_THROWS_AS(TrustStore::load((dir / "missing").string()), Error);
  CHECK_THROWS_AS(DeviceCredential::manufacture("has space", MacAlgorithm::kHmacSha1), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("http loopback carries attested and plain requests") {
  Bus bus;
  auto device = DeviceCredential::manufacture("phone-http", MacAlgorithm::kHmacSha1);
  TrustStore trust = trust_of(device);
  auto server = std::make_shared<RemoteServer>(trust, nullptr);
  std::vector<std::string> lines;
  std::mutex mu;
  VerifierHttpServer http(server, [&](const std::string& line) {
    std::lock_guard lock(mu);
    lines.push_back(line);
  });
  int port = http.start("127.0.0.1", 0);
  auto transport = std::make_shared<HttpTransport>("127.0.0.1", port);
  NetworkProvider provider(bus, device, transport);
  auto a = bus.spawn("A", 2001, {});
  auto b = bus.spawn("B", 2002, {}, [&](const ProcessHandle& self,
                                        const CallContext& ctx, const Message& m) {
    auto r = net_client::rpc(bus, self, "https://svc/", m.payload, ctx.statements);
    return Reply{Encoder().u32(r.status).take()};
  });
  Statement s = bus.make_statement(a, Message{"order", bytes_of("o"), 3});
  Reply r = bus.call(a, "B", Message{"go", bytes_of("body"), 0},
                     ChainMode::kPropagate, {s});
  CHECK(Decoder(r.payload).u32() == 200);
  CHECK(net_client::rpc_plain(bus, a, "https://svc/", bytes_of("echo")).body ==
        bytes_of("echo"));

  // Impersonation over the wire: evidence from a key the server never saw.
  WireRequest forged;
  forged.device_id = "phone-http";
  forged.url = "u";
  forged.headers = {{std::string(kChainHeader), "BankApp"},
                    {std::string(kStatementsHeader), "00000000"}};
  forged.evidence = mac_create(keygen(MacAlgorithm::kHmacSha1), signed_body(forged));
  CHECK(transport->send(forged).status == RemoteServer::kStatusBadChannelAuth);
  http.stop();

  std::lock_guard lock(mu);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "ACCEPT device=phone-http url=https://svc/ chain=[A,B] statements=[A says order]");
  CHECK(lines[1] == "REJECT BadChannelAuth");
}
