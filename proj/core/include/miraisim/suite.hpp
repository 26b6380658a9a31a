#ifndef MIRAISIM_SUITE_HPP
#define MIRAISIM_SUITE_HPP

#include <map>
#include <string>

#include "miraisim/analysis.hpp"
#include "miraisim/config.hpp"
#include "miraisim/scenario.hpp"

namespace miraisim {

// The five reported scenarios come out of three simulations: an idle run,
// a TCP flood run and a UDP flood run, reading the attacker node for the
// compromised columns and the victim node for the rest.
struct SuiteOutputs {
  DeltaTable table;  // aggregates over overhead-normalized series
  ScenarioDrivers drivers;
  std::map<ScenarioId, SampleSeries> normalized;
  std::map<ScenarioId, double> energy_joules;
  ScenarioResult baseline_run;
  ScenarioResult tcp_run;
  ScenarioResult udp_run;
};

SuiteOutputs run_suite(const ScenarioConfig& base,
                       const ResourceModelParams& params);

// Fits coefficients against the targets using drivers measured from the
// same three simulations the suite runs.
CalibrationResult calibrate_from_runs(const ScenarioConfig& base,
                                      const DeltaTargets& targets,
                                      const ResourceModelParams& base_params);

// Per-scenario configs the suite executes, exposed for the cli.
ScenarioConfig suite_variant(const ScenarioConfig& base,
                             const std::string& kind);  // baseline|tcp|udp

}  // namespace miraisim

#endif
