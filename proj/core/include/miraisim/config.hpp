#ifndef MIRAISIM_CONFIG_HPP
#define MIRAISIM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "miraisim/flood.hpp"
#include "miraisim/ipv4.hpp"
#include "miraisim/link.hpp"
#include "miraisim/node.hpp"
#include "miraisim/sim_time.hpp"

namespace miraisim {

struct PopulationConfig {
  std::uint32_t count = 2;
  double vulnerable_fraction = 0.0;
  std::map<Arch, double> arch_mix = {{Arch::Arm, 1.0}};
  // "wordlist": vulnerable nodes draw a builtin credential, the rest get an
  // out-of-list pair. "none": devices expose no telnet service at all.
  std::string credential_rule = "wordlist";
  std::uint32_t initial_bots = 1;
  bool pre_registered = false;
  // Zero disables the scan timer entirely.
  std::uint32_t scan_probes_per_tick = 0;
  SimTime scan_tick = milliseconds(10);
};

struct InfrastructureConfig {
  std::optional<Ipv4Address> cnc;
  std::optional<Ipv4Address> report;
  std::optional<Ipv4Address> loader;
  bool defaulted = true;
};

struct TelemetryConfig {
  SimTime cadence = milliseconds(100);
  double overhead_fraction = 0.01;
  // "victim", "all" or "none".
  std::string capture = "victim";
  // "default" or a model-params json path.
  std::string params_source = "default";
};

struct CommandEntry {
  SimTime at = 0;
  std::string preset;  // resolved against the flood target at run time
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  SimTime horizon = seconds(60);
  AddressBlock address_space = {Ipv4Address{0x0A000000}, 16};  // 10.0.0.0/16
  PopulationConfig population;
  InfrastructureConfig infrastructure;
  LinkParams link;
  // Either an explicit spec or a preset name; exactly one must be set.
  std::optional<FloodSpec> flood;
  std::optional<std::string> flood_preset;
  // "auto" targets the victim device.
  std::string flood_target = "auto";
  // "per-stream" (rate applies to each stream) or "aggregate" (rate is
  // split across streams). Presets are always per-stream.
  std::string flood_rate_mode = "per-stream";
  std::vector<CommandEntry> commands;
  TelemetryConfig telemetry;

  // Throws RangeViolationError / MissingRequiredError on a bad combination.
  void validate() const;
};

// Strict INI: `key = value` lines under [population] / [infrastructure] /
// [flood] / [telemetry], `t=<n>s issue <preset>` lines under [commands],
// seed / horizon_s / address_space above the first section. Unknown keys
// are rejected.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& config);

// The two-device flood topology used throughout: one pre-registered
// attacker, one victim, scanning off, 60 s horizon.
ScenarioConfig suite_config(std::uint64_t seed);

// Resolves preset/spec and target into a concrete FloodSpec.
FloodSpec resolve_flood(const ScenarioConfig& config, Ipv4Address victim);

}  // namespace miraisim

#endif
