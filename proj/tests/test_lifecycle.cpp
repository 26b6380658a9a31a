#include <doctest.h>

#include <cmath>
#include <set>
#include <variant>
#include <vector>

#include "miraisim/errors.hpp"
#include "miraisim/lifecycle.hpp"

using namespace miraisim;

namespace {

ScanConfig sixteen_space() {
  ScanConfig config;
  config.address_space = parse_cidr("10.0.0.0/16");
  return config;
}

NodeProfile telnet_device(const char* user, const char* pass) {
  NodeProfile node;
  node.addr = parse_ipv4("10.0.0.50");
  node.services[23] = {"telnet"};
  node.telnet_credential = CredentialEntry{user, pass, 1};
  return node;
}

}  // namespace

TEST_CASE("scan tick emits the configured probe count on telnet ports") {
  ScanConfig config = sixteen_space();
  SplitMix64 rng(1);
  const auto probes = scan_tick(rng, config);
  REQUIRE(probes.size() == 1);
  CHECK((probes[0].dst_port == 23 || probes[0].dst_port == 2323));

  config.probes_per_tick = 10;
  const auto batch = scan_tick(rng, config);
  CHECK(batch.size() == 10);

  config.probes_per_tick = 0;
  CHECK_THROWS_AS(scan_tick(rng, config), SimError);
}

TEST_CASE("scan tick composes deterministically with the generator") {
  ScanConfig config = sixteen_space();
  SplitMix64 rng(7);
  const auto probes = scan_tick(rng, config);
  // Address draw first (seed 7 -> offset 3543), then the port draw.
  CHECK(probes[0].target.value == 0x0A000000u + 3543u);
  SplitMix64 replay(7);
  replay.next();
  const std::uint16_t port = replay.chance(0.9) ? 23 : 2323;
  CHECK(probes[0].dst_port == port);
}

TEST_CASE("scan tick splits ports 9 to 1") {
  ScanConfig config = sixteen_space();
  SplitMix64 rng(5);
  int on_2323 = 0;
  constexpr int kProbes = 100'000;
  for (int i = 0; i < kProbes; ++i)
    if (scan_tick(rng, config)[0].dst_port == 2323) ++on_2323;
  const double fraction = static_cast<double>(on_2323) / kProbes;
  CHECK(fraction == doctest::Approx(0.10096).epsilon(1e-9));  // frozen, seed 5
  CHECK(std::fabs(fraction - 0.10) <= 0.01);
}

TEST_CASE("scan tick respects exclusion blocks") {
  ScanConfig config;
  config.address_space = parse_cidr("10.0.0.0/30");
  config.exclusions = {parse_cidr("10.0.0.0/31"), parse_cidr("10.0.0.2/32")};
  SplitMix64 rng(3);
  for (int i = 0; i < 32; ++i)
    CHECK(scan_tick(rng, config)[0].target.value == 0x0A000003u);
}

TEST_CASE("brute force succeeds on the matching wordlist entry") {
  const Wordlist& list = Wordlist::builtin();
  const CredentialEntry fifth = list.at(4);
  NodeProfile target =
      telnet_device(fifth.username.c_str(), fifth.password.c_str());
  bot_state::BruteForcing state{target.addr, 0};

  for (int attempt = 0; attempt < 4; ++attempt) {
    const auto outcome = brute_force_step(state, target, list);
    CHECK(std::holds_alternative<BruteForceContinue>(outcome));
  }
  CHECK(state.attempt_index == 4);
  const auto outcome = brute_force_step(state, target, list);
  REQUIRE(std::holds_alternative<BruteForceSuccess>(outcome));
  CHECK(std::get<BruteForceSuccess>(outcome).credential == fifth);
  CHECK(state.attempt_index == 4);  // success does not advance the cursor
}

TEST_CASE("brute force without a telnet listener is unreachable") {
  NodeProfile target;
  target.addr = parse_ipv4("10.0.0.50");
  bot_state::BruteForcing state{target.addr, 0};
  const auto outcome = brute_force_step(state, target, Wordlist::builtin());
  CHECK(std::holds_alternative<TargetUnreachable>(outcome));
}

TEST_CASE("an out-of-list credential survives exactly 62 attempts") {
  NodeProfile target = telnet_device("local", "not-in-any-list");
  bot_state::BruteForcing state{target.addr, 0};
  const Wordlist& list = Wordlist::builtin();

  int continues = 0;
  for (;;) {
    const auto outcome = brute_force_step(state, target, list);
    if (std::holds_alternative<BruteForceContinue>(outcome)) {
      ++continues;
      continue;
    }
    REQUIRE(std::holds_alternative<BruteForceFailure>(outcome));
    break;
  }
  CHECK(continues == 61);  // 62 attempts: 61 continues and a final failure
  // The exhausted cursor keeps reporting failure.
  CHECK(std::holds_alternative<BruteForceFailure>(
      brute_force_step(state, target, list)));
}

TEST_CASE("the report server deduplicates by victim address") {
  ReportServer server;
  const ReportRecord record{parse_ipv4("10.0.0.50"), 23,
                            {"root", "root", 1}, 1000};
  CHECK(server.submit(record) == 1);
  CHECK(server.contains(record.victim));
  CHECK(server.last_was_new());
  CHECK(server.submit(record) == 1);
  CHECK_FALSE(server.last_was_new());
  CHECK(server.record_for(record.victim).credential ==
        CredentialEntry{"root", "root", 1});
}

TEST_CASE("reporting without a server faults") {
  const ReportRecord record{parse_ipv4("10.0.0.50"), 23, {"a", "b", 1}, 0};
  CHECK_THROWS_AS(report_compromise(nullptr, record), NoReportServerError);
  ReportServer server;
  CHECK(report_compromise(&server, record) == 1);
}

TEST_CASE("the loader infects only supported uninfected architectures") {
  LoaderConfig loader;
  loader.payloads = {Arch::Arm, Arch::Mips};

  NodeProfile arm = telnet_device("root", "root");
  arm.architecture = Arch::Arm;
  CHECK(loader_dispatch(loader, arm) == LoadOutcome::Infected);
  CHECK(arm.infected);
  CHECK(arm.self_file_deleted);
  CHECK_FALSE(arm.watchdog_enabled);

  NodeProfile sh4 = telnet_device("root", "root");
  sh4.architecture = Arch::Sh4;
  CHECK(loader_dispatch(loader, sh4) == LoadOutcome::UnsupportedArch);
  CHECK_FALSE(sh4.infected);

  CHECK(loader_dispatch(loader, arm) == LoadOutcome::AlreadyInfected);
}

TEST_CASE("the cnc registry separates new and known bots by port") {
  CncRegistry registry;
  const Ipv4Address a = parse_ipv4("10.0.0.10");
  const Ipv4Address b = parse_ipv4("10.0.0.11");

  CHECK(registry.accept(a, 23) == CncAcceptOutcome::NewBotRegistered);
  CHECK(registry.size() == 1);
  CHECK(registry.accept(a, 23) == CncAcceptOutcome::KnownBot);
  CHECK(registry.size() == 1);
  CHECK(registry.accept(a, 101) == CncAcceptOutcome::KnownBot);
  CHECK(registry.accept(b, 101) == CncAcceptOutcome::Rejected);
  CHECK_FALSE(registry.is_registered(b));
}

TEST_CASE("command issue fans out to every registered bot") {
  CncRegistry registry;
  registry.accept(parse_ipv4("10.0.0.10"), 23);
  registry.accept(parse_ipv4("10.0.0.11"), 23);

  AttackCommand command;
  command.spec = *flood_preset("paper-udp", parse_ipv4("10.0.0.20"));
  command.issue_at = seconds(5);

  std::vector<Ipv4Address> tasked;
  const std::size_t count = registry.issue(
      command, [&](Ipv4Address addr, const AttackCommand&) {
        tasked.push_back(addr);
      });
  CHECK(count == 2);
  CHECK(tasked.size() == 2);

  CncRegistry empty;
  CHECK(empty.issue(command, [](Ipv4Address, const AttackCommand&) {}) == 0);

  command.spec.duration = 0;
  CHECK_THROWS_AS(
      registry.issue(command, [](Ipv4Address, const AttackCommand&) {}),
      InvalidSpecError);
}

TEST_CASE("the killer closes and reserves 22, 23 and 80") {
  NodeProfile node = telnet_device("root", "root");
  node.infected = true;
  node.services[22] = {"ssh"};
  node.services[80] = {"http"};
  node.services[8080] = {"http-alt"};
  node.competing_malware = true;

  const auto closed = killer_apply(node);
  CHECK(closed == std::vector<std::uint16_t>{22, 23, 80});
  CHECK(node.serves(8080));
  CHECK_FALSE(node.serves(22));
  CHECK_FALSE(node.serves(23));
  CHECK_FALSE(node.serves(80));
  CHECK(node.reserved_ports == std::set<std::uint16_t>{22, 23, 80});
  CHECK_FALSE(node.competing_malware);

  // No listener answers afterwards, so brute force cannot begin.
  CHECK_FALSE(node.telnet_open());
  bot_state::BruteForcing state{node.addr, 0};
  CHECK(std::holds_alternative<TargetUnreachable>(
      brute_force_step(state, node, Wordlist::builtin())));

  // Reapplying closes nothing further.
  CHECK(killer_apply(node).empty());
}

TEST_CASE("bot state names cover the whole lifecycle") {
  CHECK(bot_state_name(bot_state::Dormant{}) == std::string("dormant"));
  CHECK(bot_state_name(bot_state::Scanning{}) == std::string("scanning"));
  CHECK(bot_state_name(bot_state::BruteForcing{}) ==
        std::string("brute-forcing"));
  CHECK(bot_state_name(bot_state::Reporting{}) == std::string("reporting"));
  CHECK(bot_state_name(bot_state::AwaitingLoad{}) ==
        std::string("awaiting-load"));
  CHECK(bot_state_name(bot_state::Registered{}) == std::string("registered"));
  CHECK(bot_state_name(bot_state::Attacking{}) == std::string("attacking"));
}
