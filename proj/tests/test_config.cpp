#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "provipc/config.hpp"
#include "provipc/error.hpp"

using namespace provipc;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kTransportError;
}

}  // namespace

TEST_CASE("defaults") {
  Config c;
  CHECK(c.mac_algorithm == MacAlgorithm::kHmacSha1);
  CHECK(c.freshness_ms == 500);
  CHECK(c.max_chain_depth == 64);
  CHECK(c.transport == TransportKind::kMemory);
}

TEST_CASE("file values apply and map onto scenario options") {
  auto path = write_temp("provipc_cfg_ok.conf",
                         "# comment\n"
                         "mac_algorithm = hmac-sha256\n"
                         "\n"
                         "freshness_ms=250  # trailing comment\n"
                         "max_chain_depth = 8\n"
                         "max_payload = 4096\n"
                         "transport = http\n"
                         "seed = 99\n");
  Config c = load_config(path);
  ScenarioOptions o = c.scenario_options();
  CHECK(o.bus.algorithm == MacAlgorithm::kHmacSha256);
  CHECK(o.freshness_ms == 250);
  CHECK(o.bus.max_chain_depth == 8);
  CHECK(o.bus.max_payload == 4096);
  CHECK(o.transport == TransportKind::kHttp);
  CHECK(o.seed == 99);
  std::filesystem::remove(path);
}

TEST_CASE("bad files are config errors naming the line") {
  auto unknown = write_temp("provipc_cfg_bad1.conf", "seed = 1\ncolour = blue\n");
  try {
    load_config(unknown);
    FAIL("expected an Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfigError);
    CHECK(std::string(e.what()).find(":2: unknown key 'colour'") != std::string::npos);
  }
  auto bad_value = write_temp("provipc_cfg_bad2.conf", "freshness_ms = soon\n");
  CHECK(code_of([&] { load_config(bad_value); }) == ErrorCode::kConfigError);
  auto no_eq = write_temp("provipc_cfg_bad3.conf", "transport memory\n");
  CHECK(code_of([&] { load_config(no_eq); }) == ErrorCode::kConfigError);
  auto bad_alg = write_temp("provipc_cfg_bad4.conf", "mac_algorithm = md5\n");
  CHECK(code_of([&] { load_config(bad_alg); }) == ErrorCode::kConfigError);
  CHECK(code_of([] { load_config("/nonexistent/provipc.conf"); }) ==
        ErrorCode::kConfigError);
  CHECK(code_of([] { Config().set("max_chain_depth", "0"); }) ==
        ErrorCode::kConfigError);
  for (auto p : {unknown, bad_value, no_eq, bad_alg}) std::filesystem::remove(p);
}
