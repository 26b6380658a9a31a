#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "miraisim/analysis.hpp"
#include "miraisim/errors.hpp"

using namespace miraisim;

namespace {

// Table whose modeled-metric means hit the reference deltas exactly and
// whose Ethernet means satisfy the sender/victim ordering.
DeltaTable reference_table() {
  const ResourceModelParams defaults = ResourceModelParams::defaults();
  const DeltaTargets targets = DeltaTargets::reference();
  DeltaTable table;
  for (Metric metric : kModeledMetrics) {
    const double base = defaults.model(metric).base;
    table.set(ScenarioId::Baseline, metric, {base, 0.0, 600});
    for (ScenarioId id : kAttackScenarios) {
      const double target = targets.values.at(id).at(metric);
      table.set(id, metric, {base * (1.0 + target / 100.0), 0.0, 600});
    }
  }
  table.set(ScenarioId::Baseline, Metric::EthRxKbps, {0.0, 0.0, 600});
  table.set(ScenarioId::Baseline, Metric::EthTxKbps, {0.0, 0.0, 600});
  table.set(ScenarioId::CompromisedTcp, Metric::EthRxKbps, {9'000, 0.0, 600});
  table.set(ScenarioId::CompromisedTcp, Metric::EthTxKbps, {60'000, 0.0, 600});
  table.set(ScenarioId::CompromisedUdp, Metric::EthRxKbps, {0.0, 0.0, 600});
  table.set(ScenarioId::CompromisedUdp, Metric::EthTxKbps, {180'000, 0.0, 600});
  table.set(ScenarioId::VictimTcp, Metric::EthRxKbps, {55'000, 0.0, 600});
  table.set(ScenarioId::VictimTcp, Metric::EthTxKbps, {9'000, 0.0, 600});
  table.set(ScenarioId::VictimUdp, Metric::EthRxKbps, {170'000, 0.0, 600});
  table.set(ScenarioId::VictimUdp, Metric::EthTxKbps, {0.0, 0.0, 600});
  return table;
}

ScenarioDrivers plausible_drivers() {
  ScenarioDrivers drivers;
  drivers[ScenarioId::CompromisedTcp] = {3'000, 1'500, 6, 0};
  drivers[ScenarioId::CompromisedUdp] = {18'750, 0, 0, 0};
  drivers[ScenarioId::VictimTcp] = {1'500, 3'000, 6, 500};
  drivers[ScenarioId::VictimUdp] = {0, 18'750, 0, 600};
  return drivers;
}

}  // namespace

TEST_CASE("aggregate reports population statistics") {
  const AggregateStats stats = aggregate({1.0, 2.0, 3.0});
  CHECK(stats.mean == doctest::Approx(2.0));
  CHECK(stats.stdev == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(stats.count == 3);

  const AggregateStats flat = aggregate({5.0, 5.0, 5.0, 5.0});
  CHECK(flat.mean == doctest::Approx(5.0));
  CHECK(flat.stdev == 0.0);

  CHECK_THROWS_AS(aggregate({}), EmptySeriesError);
}

TEST_CASE("percent delta is signed and guards the zero baseline") {
  CHECK(delta_pct(2.0, 2.0) == 0.0);
  CHECK(delta_pct(1.3844, 1.0) == doctest::Approx(38.44));
  CHECK(delta_pct(0.5, 1.0) == doctest::Approx(-50.0));
  CHECK_THROWS_AS(delta_pct(1.0, 0.0), ZeroBaselineError);
}

TEST_CASE("the delta table pins the baseline at zero") {
  const DeltaTable table = reference_table();
  for (Metric metric : kModeledMetrics)
    CHECK(table.delta(ScenarioId::Baseline, metric) == 0.0);
  CHECK(table.delta(ScenarioId::CompromisedUdp, Metric::PowerW) ==
        doctest::Approx(38.44));
  CHECK(table.delta(ScenarioId::VictimTcp, Metric::CpuPct) ==
        doctest::Approx(-6.42));

  DeltaTable sparse;
  sparse.set(ScenarioId::Baseline, Metric::CpuPct, {10.0, 0.0, 1});
  CHECK_THROWS_AS(sparse.stat(ScenarioId::VictimUdp, Metric::CpuPct),
                  IncompleteTableError);
  CHECK_THROWS_AS(sparse.stat(ScenarioId::Baseline, Metric::MemPct),
                  IncompleteTableError);
  CHECK_THROWS_AS(sparse.delta(ScenarioId::VictimUdp, Metric::CpuPct),
                  IncompleteTableError);
}

TEST_CASE("the reference deltas satisfy every ordering relation") {
  const auto checks = ordering_checks(reference_table());
  REQUIRE(checks.size() == 36);
  for (const OrderingCheck& check : checks) {
    INFO(check.name, " lhs=", check.lhs, " rhs=", check.rhs);
    CHECK(check.passed);
  }
}

TEST_CASE("ordering checks are scale invariant in the raw means") {
  DeltaTable scaled = reference_table();
  const DeltaTable original = reference_table();
  for (Metric metric : kModeledMetrics) {
    for (ScenarioId id : kAllScenarios) {
      AggregateStats stats = original.stat(id, metric);
      stats.mean *= 3.0;
      scaled.set(id, metric, stats);
    }
  }
  const auto checks = ordering_checks(scaled);
  for (const OrderingCheck& check : checks) CHECK(check.passed);
  CHECK(scaled.delta(ScenarioId::VictimTcp, Metric::SdReadKbps) ==
        doctest::Approx(64.6));
}

TEST_CASE("a falsified relation fails exactly one check") {
  DeltaTable table = reference_table();
  // Drop the UDP sender's CPU delta to 5 percent, below the TCP sender.
  table.set(ScenarioId::CompromisedUdp, Metric::CpuPct, {10.5, 0.0, 600});
  const auto checks = ordering_checks(table);
  int failures = 0;
  std::string failed_name;
  for (const OrderingCheck& check : checks)
    if (!check.passed) {
      ++failures;
      failed_name = check.name;
    }
  CHECK(failures == 1);
  CHECK(failed_name ==
        "cpu_pct delta: compromised-udp > compromised-tcp");
}

TEST_CASE("ordering checks demand the full scenario set") {
  DeltaTable partial;
  const DeltaTable full = reference_table();
  for (ScenarioId id : {ScenarioId::Baseline, ScenarioId::CompromisedTcp,
                        ScenarioId::CompromisedUdp, ScenarioId::VictimTcp})
    for (Metric metric : kAllMetrics)
      partial.set(id, metric, full.stat(id, metric));
  CHECK_THROWS_AS(ordering_checks(partial), IncompleteTableError);
}

TEST_CASE("check lines print one verdict per relation") {
  std::ostringstream out;
  write_checks(out, ordering_checks(reference_table()));
  const std::string text = out.str();
  std::size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 36);
  CHECK(text.find("FAIL") == std::string::npos);
  CHECK(text.rfind("PASS", 0) == 0);
}

TEST_CASE("calibration with zero targets yields zero coefficients") {
  DeltaTargets zero;
  for (ScenarioId id : kAttackScenarios)
    for (Metric metric : kModeledMetrics) zero.values[id][metric] = 0.0;
  const CalibrationResult result = calibrate(
      zero, plausible_drivers(), ResourceModelParams::defaults(), 0.01);
  for (Metric metric : kModeledMetrics) {
    const MetricModel& m = result.params.model(metric);
    CHECK(m.c_tx == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.c_rx == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.c_conn == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.c_log == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.base == ResourceModelParams::defaults().model(metric).base);
  }
  CHECK(result.max_abs_residual_pp == doctest::Approx(0.0));
}

TEST_CASE("calibration reproduces the reference targets exactly") {
  // Four scenarios, four coefficients, independent driver rows: the least
  // squares solution interpolates and every residual collapses.
  const CalibrationResult result =
      calibrate(DeltaTargets::reference(), plausible_drivers(),
                ResourceModelParams::defaults(), 0.01);
  CHECK(result.max_abs_residual_pp < 1e-6);
  for (ScenarioId id : kAttackScenarios)
    for (Metric metric : kModeledMetrics)
      CHECK(std::fabs(result.residual_pp.at(id).at(metric)) < 1e-6);

  // The fitted model reproduces the delta through a forward evaluation.
  const ScenarioDrivers drivers = plausible_drivers();
  const DriverVector& d = drivers.at(ScenarioId::CompromisedUdp);
  const double base = 10.0 * (1.0 - 0.01);
  const double raw = result.params.model(Metric::CpuPct).raw_eval(d);
  CHECK(100.0 * (raw - 10.0) / base == doctest::Approx(18.77).epsilon(1e-9));
}

TEST_CASE("calibration recovers known coefficients from synthetic targets") {
  const ScenarioDrivers drivers = plausible_drivers();
  ResourceModelParams truth = ResourceModelParams::defaults();
  truth.cpu_pct.c_tx = 1e-4;
  truth.cpu_pct.c_rx = -5e-5;
  truth.cpu_pct.c_conn = 0.02;
  truth.cpu_pct.c_log = 3e-4;

  DeltaTargets targets;
  const double normalized_base = truth.cpu_pct.base * (1.0 - 0.01);
  for (ScenarioId id : kAttackScenarios) {
    const DriverVector& d = drivers.at(id);
    const double load = truth.cpu_pct.raw_eval(d) - truth.cpu_pct.base;
    targets.values[id][Metric::CpuPct] = 100.0 * load / normalized_base;
    for (Metric metric : kModeledMetrics)
      if (metric != Metric::CpuPct) targets.values[id][metric] = 0.0;
  }

  const CalibrationResult result =
      calibrate(targets, drivers, ResourceModelParams::defaults(), 0.01);
  CHECK(result.params.cpu_pct.c_tx == doctest::Approx(1e-4).epsilon(1e-6));
  CHECK(result.params.cpu_pct.c_rx == doctest::Approx(-5e-5).epsilon(1e-6));
  CHECK(result.params.cpu_pct.c_conn == doctest::Approx(0.02).epsilon(1e-6));
  CHECK(result.params.cpu_pct.c_log == doctest::Approx(3e-4).epsilon(1e-6));
}

TEST_CASE("calibration rejects unusable inputs") {
  ScenarioDrivers drivers = plausible_drivers();
  drivers.erase(ScenarioId::VictimUdp);
  CHECK_THROWS_AS(calibrate(DeltaTargets::reference(), drivers,
                            ResourceModelParams::defaults(), 0.01),
                  InsufficientScenariosError);

  ScenarioDrivers degenerate;
  degenerate[ScenarioId::CompromisedTcp] = {1, 1, 0, 0};
  degenerate[ScenarioId::CompromisedUdp] = {2, 2, 0, 0};
  degenerate[ScenarioId::VictimTcp] = {3, 3, 0, 0};
  degenerate[ScenarioId::VictimUdp] = {4, 4, 0, 0};
  CHECK_THROWS_AS(calibrate(DeltaTargets::reference(), degenerate,
                            ResourceModelParams::defaults(), 0.01),
                  SingularSystemError);

  ResourceModelParams no_base = ResourceModelParams::defaults();
  no_base.mem_pct.base = 0.0;
  CHECK_THROWS_AS(calibrate(DeltaTargets::reference(), plausible_drivers(),
                            no_base, 0.01),
                  ZeroBaselineError);
}

TEST_CASE("an all-zero driver column pins its coefficient") {
  ScenarioDrivers drivers;
  drivers[ScenarioId::CompromisedTcp] = {3'000, 1'500, 0, 0};
  drivers[ScenarioId::CompromisedUdp] = {18'750, 0, 0, 0};
  drivers[ScenarioId::VictimTcp] = {1'500, 3'000, 0, 500};
  drivers[ScenarioId::VictimUdp] = {0, 18'750, 0, 600};
  const CalibrationResult result =
      calibrate(DeltaTargets::reference(), drivers,
                ResourceModelParams::defaults(), 0.01);
  for (Metric metric : kModeledMetrics)
    CHECK(result.params.model(metric).c_conn == 0.0);
}

TEST_CASE("report rows survive the csv round trip") {
  const DeltaTable table = reference_table();
  const DeltaTargets targets = DeltaTargets::reference();
  const std::vector<ReportRow> rows = build_report(table, &targets);
  REQUIRE(rows.size() == kScenarioCount * kMetricCount);

  int with_residual = 0;
  for (const ReportRow& row : rows)
    if (row.has_residual) {
      ++with_residual;
      CHECK(std::fabs(row.residual_pp) < 1e-9);
    }
  CHECK(with_residual == 4 * kModeledMetricCount);

  std::stringstream io;
  write_report_csv(io, rows);
  const std::vector<ReportRow> back = read_report_csv(io);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].scenario == rows[i].scenario);
    CHECK(back[i].metric == rows[i].metric);
    CHECK(back[i].mean == doctest::Approx(rows[i].mean));
    CHECK(back[i].delta_or_abs == doctest::Approx(rows[i].delta_or_abs));
    CHECK(back[i].has_residual == rows[i].has_residual);
  }

  const DeltaTable rebuilt = table_from_report(back);
  CHECK(rebuilt.delta(ScenarioId::VictimUdp, Metric::SdWriteKbps) ==
        doctest::Approx(42.98).epsilon(1e-4));
  const auto checks = ordering_checks(rebuilt);
  for (const OrderingCheck& check : checks) CHECK(check.passed);
}

TEST_CASE("a report csv without the header is rejected") {
  std::istringstream bad("not,a,report\n");
  CHECK_THROWS_AS(read_report_csv(bad), ConfigError);
}

TEST_CASE("scenario names round trip") {
  for (ScenarioId id : kAllScenarios)
    CHECK(parse_scenario(to_string(id)) == id);
  CHECK_THROWS_AS(parse_scenario("victim-icmp"), ConfigError);
}
