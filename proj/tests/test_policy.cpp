#include <algorithm>
#include <random>

#include "doctest.h"
#include "provipc/authority.hpp"
#include "provipc/encoding.hpp"
#include "provipc/policy.hpp"
#include "test_support.hpp"

using namespace provipc;

namespace {

const PermissionToken kFine("FINE_LOCATION");
const Principal kMapper{2001, 11};
const Principal kEvil{2002, 12};

PermissionTable fig2_table() {
  PermissionTable t;
  t.grant(kMapper.uid, {kFine});
  return t;
}

// Brute force: allowed iff there is a link and no link lacks the grant.
bool oracle(const std::vector<Principal>& chain,
            const std::vector<std::set<int>>& grants, int perm) {
  if (chain.empty()) return false;
  for (const auto& p : chain) {
    if (!grants[p.uid].contains(perm)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("confused deputy is denied, privilege drop is allowed") {
  PermissionTable t = fig2_table();
  Decision d = evaluate({kMapper, kEvil}, kFine, t);
  CHECK_FALSE(d.allowed);
  CHECK(d.reason == DenyReason::kUnprivilegedLink);
  CHECK(d.index == 1);
  CHECK(evaluate({kMapper}, kFine, t).allowed);
  CHECK(evaluate({}, kFine, t) == Decision::deny(DenyReason::kNoPrincipal));
}

TEST_CASE("deny index names the most recent offender") {
  PermissionTable t = fig2_table();
  CHECK(evaluate({kEvil, kMapper, kEvil}, kFine, t).index == 0);
  CHECK(evaluate({kMapper, kMapper, kEvil}, kFine, t).index == 2);
  CHECK(to_string(evaluate({kMapper, kEvil}, kFine, t)) == "Deny(1)");
}

TEST_CASE("matches the brute-force oracle on every short chain") {
  // 4 apps x 3 permissions, chains up to length 4; the acceptance suite
  // runs the full 5 x 4 x 6 sweep.
  std::mt19937_64 rng(11);
  const int apps = 4, perms = 3;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::set<int>> grants(apps);
    PermissionTable table;
    for (int a = 0; a < apps; ++a) {
      for (int p = 0; p < perms; ++p) {
        if (rng() % 2) {
          grants[a].insert(p);
          table.grant(a, {PermissionToken("P" + std::to_string(p))});
        }
      }
    }
    for (int len = 0; len <= 4; ++len) {
      std::vector<int> digits(len, 0);
      for (;;) {
        std::vector<Principal> links;
        for (int d : digits) links.push_back({static_cast<std::uint32_t>(d), 1});
        for (int p = 0; p < perms; ++p) {
          REQUIRE(evaluate(CallChain(links), PermissionToken("P" + std::to_string(p)), table)
                      .allowed == oracle(links, grants, p));
        }
        int i = 0;
        while (i < len && ++digits[i] == apps) digits[i++] = 0;
        if (i == len) break;
      }
    }
  }
}

TEST_CASE("adding links never adds privilege; order never matters") {
  provipc::testing::Gen gen(21);
  PermissionTable t;
  for (std::uint32_t uid = 0; uid < 3; ++uid) {
    if (gen.below(2)) t.grant(uid, {kFine});
  }
  for (int i = 0; i < 2000; ++i) {
    CallChain small = gen.chain(4);
    std::vector<Principal> big(small.begin(), small.end());
    CallChain extra = gen.chain(3);
    big.insert(big.end(), extra.begin(), extra.end());
    std::shuffle(big.begin(), big.end(), gen.engine());
    if (!small.empty() && evaluate(CallChain(big), kFine, t).allowed) {
      CHECK(evaluate(small, kFine, t).allowed);
    }
    std::vector<Principal> perm(small.begin(), small.end());
    std::shuffle(perm.begin(), perm.end(), gen.engine());
    CHECK(evaluate(CallChain(perm), kFine, t).allowed ==
          evaluate(small, kFine, t).allowed);
  }
}

TEST_CASE("evaluate_with_statements") {
  Authority authority(MacAlgorithm::kHmacSha1);
  authority.admit(kMapper, {"Mapper", {kFine}});
  SecretKey key = authority.register_key(kMapper);
  Statement s{kMapper, {"locate", {1}, 3}, {}};
  s.tag = mac_create(key, statement_signing_bytes(s.speaker, s.message));
  PermissionTable t = fig2_table();

  std::vector<Statement> good{s};
  CHECK(evaluate_with_statements({kMapper}, kFine, t, good, {kMapper},
                                 authority)
            .allowed);

  Statement tampered = s;
  tampered.message.payload[0] = 2;
  std::vector<Statement> bad{tampered};
  Decision d = evaluate_with_statements({kMapper}, kFine, t, bad, {kMapper},
                                        authority);
  CHECK_FALSE(d.allowed);
  CHECK(d.reason == DenyReason::kMissingStatement);

  CHECK_FALSE(
      evaluate_with_statements({kMapper}, kFine, t, {}, {kMapper}, authority)
          .allowed);
  CHECK(evaluate_with_statements({kMapper, kEvil}, kFine, t, good, {kMapper},
                                 authority)
            .reason == DenyReason::kUnprivilegedLink);
}
