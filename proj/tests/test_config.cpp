#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "saekit/config.hpp"
#include "saekit/io.hpp"

using namespace saekit;

namespace {

std::string write_cfg(const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "saekit_config_tests";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "run.cfg").string();
  write_text_file(path, content);
  return path;
}

}  // namespace

TEST_CASE("config files parse key = value lines with comments") {
  const auto path = write_cfg(
      "# a run\n"
      "lambda = 0.01\n"
      "steps = 500   # inline comment\n"
      "\n"
      "data = /tmp/x.saed\n");
  const RunConfig cfg = RunConfig::from_file(path);
  REQUIRE(cfg.get_double("lambda") == 0.01);
  REQUIRE(cfg.get_u64("steps") == 500);
  REQUIRE(cfg.get("data") == "/tmp/x.saed");
  REQUIRE_FALSE(cfg.has("missing"));
  REQUIRE(cfg.get_or("missing", "fallback") == "fallback");
}

TEST_CASE("malformed config lines are rejected with their line number") {
  const auto path = write_cfg("lambda = 1\nthis line has no equals\n");
  try {
    RunConfig::from_file(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("duplicate and unknown keys are rejected") {
  const auto dup = write_cfg("a = 1\na = 2\n");
  REQUIRE_THROWS_AS(RunConfig::from_file(dup), ConfigError);
  const auto path = write_cfg("lambda = 1\nmystery = 2\n");
  const RunConfig cfg = RunConfig::from_file(path);
  REQUIRE_THROWS_AS(cfg.require_known({"lambda"}), ConfigError);
  cfg.require_known({"lambda", "mystery"});  // passes
}

TEST_CASE("non-numeric values are rejected on typed access") {
  const auto path = write_cfg("steps = soon\nlr = fast\n");
  const RunConfig cfg = RunConfig::from_file(path);
  REQUIRE_THROWS_AS(cfg.get_u64("steps"), ConfigError);
  REQUIRE_THROWS_AS(cfg.get_double("lr"), ConfigError);
}

TEST_CASE("resolved config round-trips through a file") {
  RunConfig cfg;
  cfg.set("lambda", "0.5");
  cfg.set("out", "/tmp/o");
  const auto dir = std::filesystem::temp_directory_path() / "saekit_config_tests";
  const auto path = (dir / "resolved.cfg").string();
  cfg.write_resolved(path);
  const RunConfig back = RunConfig::from_file(path);
  REQUIRE(back.values() == cfg.values());
}
