#include "doctest.h"
#include "provipc/encoding.hpp"
#include "provipc/error.hpp"
#include "test_support.hpp"

using namespace provipc;
using provipc::testing::Gen;
using provipc::testing::read_golden;

namespace {

const Message kSampleMessage{"purchase_order", {1, 2, 3}, 1700000000000ULL};

template <typename Make>
void check_round_trip_and_injective(Make make, int pairs) {
  using T = decltype(make());
  for (int i = 0; i < pairs; ++i) {
    T a = make();
    T b = make();
    Bytes ea = canonical_encode(a);
    Bytes eb = canonical_encode(b);
    REQUIRE(canonical_decode<T>(ea) == a);
    REQUIRE((ea == eb) == (a == b));
  }
}

}  // namespace

TEST_CASE("principal layout is fixed-width big-endian") {
  CHECK(canonical_encode(Principal{0, 0}) == Bytes(8, 0));
  CHECK(canonical_encode(Principal{1, 2}) == Bytes{0, 0, 0, 1, 0, 0, 0, 2});
  CHECK(canonical_encode(Principal{0, 0}) == read_golden("principal_zero"));
  CHECK(canonical_encode(Principal{1, 2}) == read_golden("principal_1_2"));
  CHECK(canonical_encode(Principal{0xFFFFFFFF, 0xFFFFFFFE}) ==
        read_golden("principal_max"));
}

TEST_CASE("golden encodings") {
  CHECK(canonical_encode(Message{"noop", {}, 0}) == read_golden("message_noop"));
  CHECK(canonical_encode(kSampleMessage) == read_golden("message_sample"));
  CHECK(canonical_encode(Message{"pr\xc3\xa9" "f\xc3\xa9rence", {0x00, 0xff},
                                 0xFFFFFFFFFFFFFFFFULL}) ==
        read_golden("message_utf8"));

  Statement s{{1001, 7}, kSampleMessage, {Bytes(20, 0xAA)}};
  CHECK(canonical_encode(s) == read_golden("statement_sample"));

  CHECK(canonical_encode(CallChain{}) == read_golden("chain_empty"));
  CHECK(canonical_encode(CallChain{{1001, 7}, {1002, 8}}) ==
        read_golden("chain_two"));
  CHECK(canonical_encode(ResolvedChain{{"ExampleApp", "PayBuddy"}}) ==
        read_golden("resolved_two"));
  CHECK(canonical_encode(ResolvedChain{}) == read_golden("resolved_empty"));
}

TEST_CASE("statement signing bytes are speaker then message") {
  Bytes expected = canonical_encode(Principal{1001, 7});
  Bytes msg = canonical_encode(kSampleMessage);
  expected.insert(expected.end(), msg.begin(), msg.end());
  CHECK(statement_signing_bytes({1001, 7}, kSampleMessage) == expected);
}

TEST_CASE("round trip and injectivity on random values") {
  Gen gen(0x5eed);
  check_round_trip_and_injective([&] { return gen.principal(); }, 20000);
  check_round_trip_and_injective([&] { return gen.message(); }, 20000);
  check_round_trip_and_injective([&] { return gen.statement(); }, 20000);
  check_round_trip_and_injective([&] { return gen.chain(); }, 20000);
  check_round_trip_and_injective([&] { return gen.resolved(); }, 20000);
}

TEST_CASE("every strict prefix of an encoding is rejected") {
  Statement s{{1001, 7}, kSampleMessage, {Bytes(20, 0xAA)}};
  Bytes full = canonical_encode(s);
  for (std::size_t n = 0; n < full.size(); ++n) {
    ByteView prefix(full.data(), n);
    CHECK_THROWS_AS(canonical_decode<Statement>(prefix), Error);
  }
  Bytes longer = full;
  longer.push_back(0);
  CHECK_THROWS_AS(canonical_decode<Statement>(longer), Error);
}

TEST_CASE("oversized element counts are rejected before allocation") {
  Bytes evil{0xFF, 0xFF, 0xFF, 0xFF};
  try {
    canonical_decode<CallChain>(evil);
    FAIL("expected MalformedEncoding");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMalformedEncoding);
  }
}

TEST_CASE("lengths beyond 32 bits overflow") {
  Encoder enc;
  try {
    enc.count(std::size_t{1} << 32);
    FAIL("expected EncodingOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEncodingOverflow);
  }
}

TEST_CASE("chain_prepend") {
  const Principal a{10, 1}, b{11, 2}, c{12, 3};
  CHECK(chain_prepend(CallChain{}, b) == CallChain{b});
  CallChain just_a{a};
  CHECK(chain_prepend(just_a, b) == CallChain{b, a});
  CHECK(just_a == CallChain{a});

  std::vector<Principal> full(kDefaultMaxChainDepth, a);
  try {
    chain_prepend(CallChain(full), c);
    FAIL("expected ChainDepthExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kChainDepthExceeded);
  }
  full.pop_back();
  CHECK(chain_prepend(CallChain(full), c).size() == kDefaultMaxChainDepth);
}

TEST_CASE("prepend composes like concatenation") {
  Gen gen(7);
  for (int i = 0; i < 1000; ++i) {
    CallChain base = gen.chain(8);
    Principal a = gen.principal(), b = gen.principal();
    std::vector<Principal> expected{b, a};
    expected.insert(expected.end(), base.begin(), base.end());
    CHECK(chain_prepend(chain_prepend(base, a), b) == CallChain(expected));
  }
}

TEST_CASE("hex") {
  CHECK(to_hex(Bytes{0x00, 0xab, 0xff}) == "00abff");
  CHECK(from_hex("00ABff") == Bytes{0x00, 0xab, 0xff});
  CHECK_THROWS_AS(from_hex("abc"), Error);
  CHECK_THROWS_AS(from_hex("zz"), Error);
}
