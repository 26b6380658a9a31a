#ifndef MIRAISIM_SCENARIO_HPP
#define MIRAISIM_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "miraisim/config.hpp"
#include "miraisim/node.hpp"
#include "miraisim/pcap.hpp"
#include "miraisim/telemetry.hpp"

namespace miraisim {

struct NodeResult {
  std::string name;
  Ipv4Address addr;
  NodeRole role = NodeRole::Device;
  bool infected = false;
  bool registered = false;
  SampleSeries raw_samples;
  std::vector<DriverVector> drivers;
  std::uint64_t app_tx_packets = 0;   // offered by the application
  std::uint64_t wire_tx_packets = 0;  // accepted onto the wire
  std::uint64_t wire_tx_bytes = 0;
  std::uint64_t rx_packets = 0;
  std::uint64_t rx_bytes = 0;
  std::array<std::uint64_t, kPacketKindCount> rx_by_kind{};
  std::array<std::uint64_t, kPacketKindCount> wire_tx_by_kind{};
  std::uint64_t power_subsamples = 0;

  DriverVector mean_drivers() const;
};

struct ScenarioResult {
  std::vector<NodeResult> nodes;  // devices first, then cnc/report/loader
  std::vector<TraceRecord> trace;
  std::uint64_t events_processed = 0;
  std::uint64_t wire_sent_total = 0;
  std::uint64_t delivered_total = 0;
  std::uint64_t dropped_total = 0;
  std::uint64_t in_flight_at_end = 0;
  std::vector<std::uint64_t> flood_offered_per_stream;
  // (time, cumulative infected devices); first entry records the seed bots.
  std::vector<std::pair<SimTime, std::uint32_t>> infection_timeline;
  std::size_t cnc_registered = 0;

  const NodeResult& node(std::string_view name) const;
  bool has_node(std::string_view name) const;
};

// Runs one configured scenario to its horizon. Deterministic for a fixed
// (config, params, seed).
ScenarioResult run_scenario(const ScenarioConfig& config,
                            const ResourceModelParams& params);

}  // namespace miraisim

#endif
