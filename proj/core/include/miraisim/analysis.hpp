#ifndef MIRAISIM_ANALYSIS_HPP
#define MIRAISIM_ANALYSIS_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "miraisim/telemetry.hpp"

namespace miraisim {

enum class ScenarioId : std::uint8_t {
  Baseline,
  CompromisedTcp,
  CompromisedUdp,
  VictimTcp,
  VictimUdp,
};
constexpr int kScenarioCount = 5;
constexpr std::array<ScenarioId, kScenarioCount> kAllScenarios = {
    ScenarioId::Baseline, ScenarioId::CompromisedTcp,
    ScenarioId::CompromisedUdp, ScenarioId::VictimTcp, ScenarioId::VictimUdp};
constexpr std::array<ScenarioId, 4> kAttackScenarios = {
    ScenarioId::CompromisedTcp, ScenarioId::CompromisedUdp,
    ScenarioId::VictimTcp, ScenarioId::VictimUdp};

std::string to_string(ScenarioId id);
ScenarioId parse_scenario(std::string_view text);

struct AggregateStats {
  double mean = 0;
  double stdev = 0;  // population standard deviation
  std::size_t count = 0;
};

AggregateStats aggregate(const std::vector<double>& series);

// Signed percent change of scenario_mean against baseline_mean.
double delta_pct(double scenario_mean, double baseline_mean);

// Per-scenario per-metric aggregates plus the derived percent deltas.
// Ethernet IO has a zero baseline, so it is carried as absolute Kbps.
class DeltaTable {
 public:
  void set(ScenarioId id, Metric metric, const AggregateStats& stats);
  bool has(ScenarioId id) const;
  const AggregateStats& stat(ScenarioId id, Metric metric) const;
  // Percent delta vs. Baseline for a modeled metric of an attack scenario.
  double delta(ScenarioId id, Metric metric) const;

 private:
  std::map<ScenarioId, std::map<Metric, AggregateStats>> cells_;
};

// Reference percent-delta targets per attack scenario and modeled metric.
struct DeltaTargets {
  std::map<ScenarioId, std::map<Metric, double>> values;
  static DeltaTargets reference();
};

// Per-scenario mean driver vector from a simulated run.
using ScenarioDrivers = std::map<ScenarioId, DriverVector>;

struct CalibrationResult {
  ResourceModelParams params;
  // Achieved-minus-target, percentage points, per attack scenario per metric.
  std::map<ScenarioId, std::map<Metric, double>> residual_pp;
  double max_abs_residual_pp = 0;
};

// Solves, per modeled metric, the linear system
//   coeffs . drivers(s) = normalized_base * target(s) / 100
// over the attack scenarios, by least squares. normalized_base is the
// baseline mean after overhead subtraction.
CalibrationResult calibrate(const DeltaTargets& targets,
                            const ScenarioDrivers& drivers,
                            const ResourceModelParams& base_params,
                            double overhead_fraction);

struct OrderingCheck {
  std::string name;
  bool passed = false;
  double lhs = 0;
  double rhs = 0;
};

// The comparative relations among scenarios: memory, CPU, energy and SD
// orderings over percent deltas; Ethernet over absolute means.
std::vector<OrderingCheck> ordering_checks(const DeltaTable& table);

void write_checks(std::ostream& out, const std::vector<OrderingCheck>& checks);

struct ReportRow {
  ScenarioId scenario = ScenarioId::Baseline;
  Metric metric = Metric::CpuPct;
  double mean = 0;
  double stdev = 0;
  double delta_or_abs = 0;
  double residual_pp = 0;
  bool has_residual = false;
};

std::vector<ReportRow> build_report(const DeltaTable& table,
                                    const DeltaTargets* targets);
void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report_csv(std::istream& in);
DeltaTable table_from_report(const std::vector<ReportRow>& rows);

}  // namespace miraisim

#endif
