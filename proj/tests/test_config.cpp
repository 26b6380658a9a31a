#include <doctest.h>

#include <string>

#include "miraisim/config.hpp"
#include "miraisim/errors.hpp"

using namespace miraisim;

namespace {

const char* kMinimalConfig =
    "seed = 42\n"
    "horizon_s = 60\n"
    "address_space = 10.0.0.0/16\n"
    "\n"
    "[flood]\n"
    "preset = paper-udp\n";

}  // namespace

TEST_CASE("a minimal config resolves the preset flood") {
  const ScenarioConfig config = parse_config(kMinimalConfig);
  CHECK(config.seed == 42);
  CHECK(config.horizon == seconds(60));
  CHECK(config.address_space == parse_cidr("10.0.0.0/16"));
  CHECK(config.population.count == 2);
  CHECK(config.telemetry.cadence == milliseconds(100));

  const FloodSpec spec = resolve_flood(config, parse_ipv4("10.0.0.11"));
  CHECK(spec.protocol == Protocol::Udp);
  CHECK(spec.target == parse_ipv4("10.0.0.11"));
  CHECK(spec.per_stream_rate_bps == 30'000'000);
  CHECK(spec.payload_bytes == 1200);
  CHECK(spec.parallel_streams == 6);
  CHECK(spec.duration == seconds(60));
}

TEST_CASE("comments and blank lines are ignored") {
  const ScenarioConfig config = parse_config(
      "# lab run\n"
      "seed = 7   # trailing comment\n"
      "\n"
      "[flood]\n"
      "preset = paper-tcp\n");
  CHECK(config.seed == 7);
  CHECK(config.flood_preset == std::string("paper-tcp"));
}

TEST_CASE("a config without a flood section fails validation") {
  CHECK_THROWS_AS(parse_config("seed = 1\n"), MissingRequiredError);
}

TEST_CASE("explicit flood keys build a spec without a preset") {
  const ScenarioConfig config = parse_config(
      "[flood]\n"
      "protocol = tcp\n"
      "rate_mbps = 10\n"
      "payload_bytes = 900\n"
      "streams = 4\n"
      "duration_s = 30\n"
      "target_port = 80\n");
  REQUIRE(config.flood.has_value());
  CHECK_FALSE(config.flood_preset.has_value());
  const FloodSpec spec = resolve_flood(config, parse_ipv4("10.0.0.11"));
  CHECK(spec.protocol == Protocol::Tcp);
  CHECK(spec.per_stream_rate_bps == 10'000'000);
  CHECK(spec.payload_bytes == 900);
  CHECK(spec.parallel_streams == 4);
  CHECK(spec.duration == seconds(30));
  CHECK(spec.target_port == 80);
}

TEST_CASE("aggregate rate mode divides across streams") {
  const ScenarioConfig config = parse_config(
      "[flood]\n"
      "protocol = udp\n"
      "rate_mbps = 24\n"
      "streams = 6\n"
      "rate_mode = aggregate\n");
  const FloodSpec spec = resolve_flood(config, parse_ipv4("10.0.0.11"));
  CHECK(spec.per_stream_rate_bps == 4'000'000);

  // Presets keep their per-stream meaning regardless of the mode default.
  const ScenarioConfig preset = parse_config(kMinimalConfig);
  CHECK(resolve_flood(preset, parse_ipv4("10.0.0.11")).per_stream_rate_bps ==
        30'000'000);
}

TEST_CASE("an explicit target overrides the victim") {
  ScenarioConfig config = parse_config(kMinimalConfig);
  config.flood_target = "10.0.0.99";
  const FloodSpec spec = resolve_flood(config, parse_ipv4("10.0.0.11"));
  CHECK(spec.target == parse_ipv4("10.0.0.99"));
}

TEST_CASE("unknown keys and sections are rejected by name") {
  CHECK_THROWS_AS(parse_config("speed = 9\n[flood]\npreset = paper-udp\n"),
                  UnknownKeyError);
  CHECK_THROWS_AS(parse_config("[warfare]\n"), UnknownKeyError);
  CHECK_THROWS_AS(parse_config("[population]\nbots = 3\n"), UnknownKeyError);
  CHECK_THROWS_AS(parse_config("[telemetry]\nsample_hz = 10\n"),
                  UnknownKeyError);
}

TEST_CASE("malformed lines carry their line number") {
  try {
    parse_config("seed = 1\nnonsense without equals\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("range violations are caught at validation") {
  CHECK_THROWS_AS(parse_config("[population]\nvulnerable_fraction = 1.5\n"
                               "[flood]\npreset = paper-udp\n"),
                  RangeViolationError);
  CHECK_THROWS_AS(parse_config("[population]\ncount = 2\ninitial_bots = 3\n"
                               "[flood]\npreset = paper-udp\n"),
                  RangeViolationError);
  // Horizon shorter than the flood.
  CHECK_THROWS_AS(parse_config("horizon_s = 30\n[flood]\npreset = paper-udp\n"),
                  RangeViolationError);
  // Cadence must divide the horizon.
  CHECK_THROWS_AS(parse_config("[flood]\npreset = paper-udp\n"
                               "[telemetry]\ncadence_ms = 7\n"),
                  RangeViolationError);
  // Population larger than the address block.
  CHECK_THROWS_AS(parse_config("address_space = 10.0.0.0/30\n"
                               "[flood]\npreset = paper-udp\n"),
                  RangeViolationError);
  // Preset and explicit spec at once.
  CHECK_THROWS_AS(parse_config("[flood]\npreset = paper-udp\nprotocol = udp\n"),
                  ConfigError);
}

TEST_CASE("command lines parse both time suffixes") {
  const ScenarioConfig config = parse_config(
      "[flood]\n"
      "preset = paper-udp\n"
      "[commands]\n"
      "t=5s issue paper-udp\n"
      "t=250ms issue paper-tcp\n");
  REQUIRE(config.commands.size() == 2);
  CHECK(config.commands[0].at == seconds(5));
  CHECK(config.commands[0].preset == "paper-udp");
  CHECK(config.commands[1].at == milliseconds(250));
  CHECK(config.commands[1].preset == "paper-tcp");

  CHECK_THROWS_AS(parse_config("[flood]\npreset = paper-udp\n"
                               "[commands]\nt=5 issue paper-udp\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[flood]\npreset = paper-udp\n"
                               "[commands]\nat 5s launch paper-udp\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[flood]\npreset = paper-udp\n"
                               "[commands]\nt=5s issue syn-burst\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[flood]\npreset = paper-udp\n"
                               "[commands]\nt=90s issue paper-udp\n"),
                  RangeViolationError);
}

TEST_CASE("serialization is a parse fixpoint") {
  ScenarioConfig config = suite_config(42);
  config.population.arch_mix = {{Arch::Arm, 0.75}, {Arch::Mips, 0.25}};
  config.population.scan_probes_per_tick = 4;
  config.commands.push_back({seconds(5), "paper-udp"});
  config.commands.push_back({milliseconds(1'500), "paper-tcp"});
  config.validate();

  const std::string text = serialize_config(config);
  const ScenarioConfig back = parse_config(text);
  CHECK(back.seed == config.seed);
  CHECK(back.horizon == config.horizon);
  CHECK(back.address_space == config.address_space);
  CHECK(back.population.count == config.population.count);
  CHECK(back.population.arch_mix == config.population.arch_mix);
  CHECK(back.population.pre_registered == config.population.pre_registered);
  CHECK(back.population.scan_probes_per_tick == 4);
  CHECK(back.flood_preset == config.flood_preset);
  CHECK(back.flood_target == config.flood_target);
  CHECK(back.telemetry.cadence == config.telemetry.cadence);
  REQUIRE(back.commands.size() == 2);
  CHECK(back.commands[0].at == seconds(5));
  CHECK(back.commands[1].at == milliseconds(1'500));
  // A second round trip is byte-identical.
  CHECK(serialize_config(back) == text);
}

TEST_CASE("the suite topology validates out of the box") {
  const ScenarioConfig config = suite_config(1);
  CHECK_NOTHROW(config.validate());
  CHECK(config.population.count == 2);
  CHECK(config.population.initial_bots == 1);
  CHECK(config.population.pre_registered);
  CHECK(config.population.scan_probes_per_tick == 0);
  CHECK(config.horizon == seconds(60));
  CHECK(config.flood_preset == std::string("paper-udp"));
}

TEST_CASE("infrastructure overrides replace the derived addresses") {
  const ScenarioConfig config = parse_config(
      "[infrastructure]\n"
      "cnc = 10.0.1.1\n"
      "report = 10.0.1.2\n"
      "loader = 10.0.1.3\n"
      "bandwidth_mbps = 50\n"
      "latency_us = 400\n"
      "queue_capacity = 32\n"
      "[flood]\n"
      "preset = paper-udp\n");
  CHECK_FALSE(config.infrastructure.defaulted);
  CHECK(config.infrastructure.cnc == parse_ipv4("10.0.1.1"));
  CHECK(config.infrastructure.report == parse_ipv4("10.0.1.2"));
  CHECK(config.infrastructure.loader == parse_ipv4("10.0.1.3"));
  CHECK(config.link.bandwidth_bps == 50'000'000);
  CHECK(config.link.latency == 400);
  CHECK(config.link.queue_capacity == 32);
}
