#include <benchmark/benchmark.h>

#include "miraisim/config.hpp"
#include "miraisim/link.hpp"
#include "miraisim/rng.hpp"
#include "miraisim/scenario.hpp"
#include "miraisim/simulator.hpp"
#include "miraisim/suite.hpp"

namespace {

using namespace miraisim;

void BM_RngNext(benchmark::State& state) {
  SplitMix64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(rng.next());
}
BENCHMARK(BM_RngNext);

void BM_RngUnit(benchmark::State& state) {
  SplitMix64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(rng.next_unit());
}
BENCHMARK(BM_RngUnit);

void BM_LinkTransmit(benchmark::State& state) {
  Link link;
  Packet packet;
  packet.protocol = Protocol::Udp;
  packet.payload_bytes = 1200;
  SimTime now = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(link.transmit(packet, now));
    now += 200;  // stay ahead of the serializer so nothing queues up
  }
}
BENCHMARK(BM_LinkTransmit);

void BM_SimulatorEventLoop(benchmark::State& state) {
  const std::uint64_t events = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    Simulator sim(events + 1);
    for (std::uint64_t t = 0; t < events; ++t)
      sim.schedule(t, [] {});
    benchmark::DoNotOptimize(sim.run());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(events));
}
BENCHMARK(BM_SimulatorEventLoop)->Arg(1'000)->Arg(100'000);

void BM_UdpFloodScenario(benchmark::State& state) {
  ScenarioConfig config = suite_variant(suite_config(5), "udp");
  config.horizon = seconds(static_cast<std::uint64_t>(state.range(0)));
  config.flood.reset();
  config.flood_preset.reset();
  FloodSpec spec;
  spec.duration = config.horizon;
  config.flood = spec;
  config.commands = {{0, "flood"}};
  const ResourceModelParams params = ResourceModelParams::defaults();
  for (auto _ : state) {
    const ScenarioResult result = run_scenario(config, params);
    benchmark::DoNotOptimize(result.events_processed);
  }
}
BENCHMARK(BM_UdpFloodScenario)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
