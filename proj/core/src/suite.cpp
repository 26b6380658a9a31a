#include "miraisim/suite.hpp"

#include "miraisim/errors.hpp"

namespace miraisim {

namespace {

struct ScenarioSource {
  ScenarioId id;
  const ScenarioResult* run;
  const char* node;
};

void fold_scenario(SuiteOutputs& out, const ScenarioSource& source,
                   const ResourceModelParams& params,
                   const TelemetryConfig& telemetry) {
  const NodeResult& node = source.run->node(source.node);
  const SampleSeries overhead =
      make_overhead_series(params, telemetry.overhead_fraction,
                           node.raw_samples.size(), telemetry.cadence);
  const SampleSeries normalized = normalize_series(node.raw_samples, overhead);

  for (Metric metric : kAllMetrics) {
    std::vector<double> values;
    values.reserve(normalized.size());
    for (const ResourceSample& s : normalized) values.push_back(s.field(metric));
    out.table.set(source.id, metric, aggregate(values));
  }
  out.drivers[source.id] = node.mean_drivers();
  out.energy_joules[source.id] = energy_joules(normalized, telemetry.cadence);
  out.normalized[source.id] = normalized;
}

}  // namespace

ScenarioConfig suite_variant(const ScenarioConfig& base,
                             const std::string& kind) {
  ScenarioConfig config = base;
  config.commands.clear();
  if (kind == "baseline") {
    // No command is ever issued; the flood spec stays for validation only.
    if (!config.flood && !config.flood_preset)
      config.flood_preset = "paper-udp";
    return config;
  }
  if (kind != "tcp" && kind != "udp")
    throw ConfigError("unknown suite variant '" + kind + "'");
  config.flood.reset();
  config.flood_preset = kind == "tcp" ? "paper-tcp" : "paper-udp";
  config.commands.push_back({0, *config.flood_preset});
  return config;
}

SuiteOutputs run_suite(const ScenarioConfig& base,
                       const ResourceModelParams& params) {
  if (base.population.count < 2)
    throw ConfigError("suite needs an attacker and a victim device");

  SuiteOutputs out;
  out.baseline_run = run_scenario(suite_variant(base, "baseline"), params);
  out.tcp_run = run_scenario(suite_variant(base, "tcp"), params);
  out.udp_run = run_scenario(suite_variant(base, "udp"), params);

  const ScenarioSource sources[] = {
      {ScenarioId::Baseline, &out.baseline_run, "victim"},
      {ScenarioId::CompromisedTcp, &out.tcp_run, "attacker"},
      {ScenarioId::CompromisedUdp, &out.udp_run, "attacker"},
      {ScenarioId::VictimTcp, &out.tcp_run, "victim"},
      {ScenarioId::VictimUdp, &out.udp_run, "victim"},
  };
  for (const ScenarioSource& source : sources)
    fold_scenario(out, source, params, base.telemetry);
  return out;
}

CalibrationResult calibrate_from_runs(const ScenarioConfig& base,
                                      const DeltaTargets& targets,
                                      const ResourceModelParams& base_params) {
  // Drivers depend on traffic alone, never on model coefficients, so the
  // measurement pass can run with the uncalibrated params.
  const SuiteOutputs outputs = run_suite(base, base_params);
  return calibrate(targets, outputs.drivers, base_params,
                   base.telemetry.overhead_fraction);
}

}  // namespace miraisim
