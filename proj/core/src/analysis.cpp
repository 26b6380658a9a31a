#include "miraisim/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "miraisim/errors.hpp"

namespace miraisim {

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::Baseline: return "baseline";
    case ScenarioId::CompromisedTcp: return "compromised-tcp";
    case ScenarioId::CompromisedUdp: return "compromised-udp";
    case ScenarioId::VictimTcp: return "victim-tcp";
    case ScenarioId::VictimUdp: return "victim-udp";
  }
  return "?";
}

ScenarioId parse_scenario(std::string_view text) {
  for (ScenarioId id : kAllScenarios)
    if (to_string(id) == text) return id;
  throw ConfigError("unknown scenario '" + std::string(text) + "'");
}

AggregateStats aggregate(const std::vector<double>& series) {
  if (series.empty()) throw EmptySeriesError("aggregate over empty series");
  AggregateStats stats;
  stats.count = series.size();
  for (double v : series) stats.mean += v;
  stats.mean /= static_cast<double>(series.size());
  double accum = 0;
  for (double v : series) accum += (v - stats.mean) * (v - stats.mean);
  stats.stdev = std::sqrt(accum / static_cast<double>(series.size()));
  return stats;
}

double delta_pct(double scenario_mean, double baseline_mean) {
  if (baseline_mean == 0)
    throw ZeroBaselineError("delta undefined for zero baseline mean");
  return 100.0 * (scenario_mean - baseline_mean) / baseline_mean;
}

void DeltaTable::set(ScenarioId id, Metric metric, const AggregateStats& stats) {
  cells_[id][metric] = stats;
}

bool DeltaTable::has(ScenarioId id) const { return cells_.count(id) != 0; }

const AggregateStats& DeltaTable::stat(ScenarioId id, Metric metric) const {
  auto scenario = cells_.find(id);
  if (scenario == cells_.end())
    throw IncompleteTableError("table lacks scenario " + to_string(id));
  auto cell = scenario->second.find(metric);
  if (cell == scenario->second.end())
    throw IncompleteTableError("table lacks " + to_string(id) + "/" +
                               to_string(metric));
  return cell->second;
}

double DeltaTable::delta(ScenarioId id, Metric metric) const {
  if (id == ScenarioId::Baseline) return 0.0;
  return delta_pct(stat(id, metric).mean,
                   stat(ScenarioId::Baseline, metric).mean);
}

DeltaTargets DeltaTargets::reference() {
  DeltaTargets t;
  auto& ctcp = t.values[ScenarioId::CompromisedTcp];
  auto& cudp = t.values[ScenarioId::CompromisedUdp];
  auto& vtcp = t.values[ScenarioId::VictimTcp];
  auto& vudp = t.values[ScenarioId::VictimUdp];
  ctcp[Metric::MemPct] = -0.93;
  vtcp[Metric::MemPct] = -0.2;
  cudp[Metric::MemPct] = -1.44;
  vudp[Metric::MemPct] = -0.96;
  ctcp[Metric::CpuPct] = 10.05;
  cudp[Metric::CpuPct] = 18.77;
  vtcp[Metric::CpuPct] = -6.42;
  vudp[Metric::CpuPct] = -1.6;
  ctcp[Metric::PowerW] = 35.87;
  vtcp[Metric::PowerW] = 37.04;
  cudp[Metric::PowerW] = 38.44;
  vudp[Metric::PowerW] = 34.61;
  ctcp[Metric::SdReadKbps] = 39.22;
  vtcp[Metric::SdReadKbps] = 64.6;
  cudp[Metric::SdReadKbps] = 32.03;
  vudp[Metric::SdReadKbps] = 49.38;
  ctcp[Metric::SdWriteKbps] = 34.68;
  vtcp[Metric::SdWriteKbps] = 55.45;
  cudp[Metric::SdWriteKbps] = 29.22;
  vudp[Metric::SdWriteKbps] = 42.98;
  return t;
}

namespace {

constexpr int kCoeffCount = 4;

std::array<double, kCoeffCount> driver_row(const DriverVector& d) {
  return {d.tx_pps, d.rx_pps, d.tcp_states, d.log_kbps};
}

// Gaussian elimination with partial pivoting on an n x n system embedded in
// fixed-size storage.
std::array<double, kCoeffCount> solve_dense(
    std::array<std::array<double, kCoeffCount>, kCoeffCount> a,
    std::array<double, kCoeffCount> y, int n) {
  double scale = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::fabs(a[i][j]));
  const double tol = scale * 1e-12;

  std::array<double, kCoeffCount> x{};
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row)
      if (std::fabs(a[row][col]) > std::fabs(a[pivot][col])) pivot = row;
    if (std::fabs(a[pivot][col]) <= tol)
      throw SingularSystemError("driver matrix is rank-deficient");
    std::swap(a[col], a[pivot]);
    std::swap(y[col], y[pivot]);
    for (int row = col + 1; row < n; ++row) {
      const double factor = a[row][col] / a[col][col];
      for (int k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      y[row] -= factor * y[col];
    }
  }
  for (int row = n - 1; row >= 0; --row) {
    double sum = y[row];
    for (int k = row + 1; k < n; ++k) sum -= a[row][k] * x[k];
    x[row] = sum / a[row][row];
  }
  return x;
}

// Least squares over the scenario rows. Columns that are zero in every
// scenario are dropped and their coefficients pinned at zero; the rest are
// scaled to comparable magnitude before forming normal equations.
std::array<double, kCoeffCount> least_squares(
    const std::vector<std::array<double, kCoeffCount>>& rows,
    const std::vector<double>& y) {
  std::array<double, kCoeffCount> col_scale{};
  for (const auto& row : rows)
    for (int j = 0; j < kCoeffCount; ++j)
      col_scale[j] = std::max(col_scale[j], std::fabs(row[j]));

  std::array<int, kCoeffCount> live{};
  int n_live = 0;
  for (int j = 0; j < kCoeffCount; ++j)
    if (col_scale[j] > 0) live[n_live++] = j;

  if (static_cast<int>(rows.size()) < n_live)
    throw InsufficientScenariosError(
        std::to_string(rows.size()) + " scenarios for " +
        std::to_string(n_live) + " free coefficients");

  std::array<std::array<double, kCoeffCount>, kCoeffCount> normal{};
  std::array<double, kCoeffCount> rhs{};
  for (std::size_t s = 0; s < rows.size(); ++s) {
    std::array<double, kCoeffCount> scaled{};
    for (int a = 0; a < n_live; ++a)
      scaled[a] = rows[s][live[a]] / col_scale[live[a]];
    for (int a = 0; a < n_live; ++a) {
      rhs[a] += scaled[a] * y[s];
      for (int b = 0; b < n_live; ++b) normal[a][b] += scaled[a] * scaled[b];
    }
  }
  const auto solution = solve_dense(normal, rhs, n_live);

  std::array<double, kCoeffCount> coeffs{};
  for (int a = 0; a < n_live; ++a)
    coeffs[live[a]] = solution[a] / col_scale[live[a]];
  return coeffs;
}

}  // namespace

CalibrationResult calibrate(const DeltaTargets& targets,
                            const ScenarioDrivers& drivers,
                            const ResourceModelParams& base_params,
                            double overhead_fraction) {
  std::vector<ScenarioId> scenarios;
  std::vector<std::array<double, kCoeffCount>> rows;
  for (ScenarioId id : kAttackScenarios) {
    auto it = drivers.find(id);
    if (it == drivers.end()) continue;
    scenarios.push_back(id);
    rows.push_back(driver_row(it->second));
  }
  if (scenarios.size() < kAttackScenarios.size())
    throw InsufficientScenariosError(
        std::to_string(scenarios.size()) + " attack scenarios supplied, " +
        std::to_string(kAttackScenarios.size()) + " required");

  CalibrationResult result;
  result.params = base_params;
  for (Metric metric : kModeledMetrics) {
    const double base = base_params.model(metric).base;
    const double normalized_base = base * (1.0 - overhead_fraction);
    if (normalized_base <= 0)
      throw ZeroBaselineError("metric " + to_string(metric) +
                              " has no positive normalized baseline");
    std::vector<double> y;
    for (ScenarioId id : scenarios) {
      double target = 0;
      if (auto s = targets.values.find(id); s != targets.values.end())
        if (auto c = s->second.find(metric); c != s->second.end())
          target = c->second;
      y.push_back(normalized_base * target / 100.0);
    }
    const auto coeffs = least_squares(rows, y);
    MetricModel& m = result.params.model(metric);
    m.c_tx = coeffs[0];
    m.c_rx = coeffs[1];
    m.c_conn = coeffs[2];
    m.c_log = coeffs[3];

    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      double achieved = 0;
      const auto row = rows[s];
      achieved += coeffs[0] * row[0] + coeffs[1] * row[1] +
                  coeffs[2] * row[2] + coeffs[3] * row[3];
      const double achieved_delta = 100.0 * achieved / normalized_base;
      const double residual = achieved_delta - y[s] * 100.0 / normalized_base;
      result.residual_pp[scenarios[s]][metric] = residual;
      result.max_abs_residual_pp =
          std::max(result.max_abs_residual_pp, std::fabs(residual));
    }
  }
  return result;
}

namespace {

struct CheckBuilder {
  const DeltaTable& table;
  std::vector<OrderingCheck> checks;

  void greater(Metric m, ScenarioId a, ScenarioId b) {
    const double lhs = table.delta(a, m);
    const double rhs = table.delta(b, m);
    checks.push_back({to_string(m) + " delta: " + to_string(a) + " > " +
                          to_string(b),
                      lhs > rhs, lhs, rhs});
  }
  void above_baseline(Metric m, ScenarioId a) {
    const double lhs = table.delta(a, m);
    checks.push_back({to_string(m) + " delta: " + to_string(a) +
                          " above baseline",
                      lhs > 0, lhs, 0});
  }
  void below_baseline(Metric m, ScenarioId a) {
    const double lhs = table.delta(a, m);
    checks.push_back({to_string(m) + " delta: " + to_string(a) +
                          " below baseline",
                      lhs < 0, lhs, 0});
  }
  void reads_over_writes(ScenarioId a) {
    const double lhs = table.delta(a, Metric::SdReadKbps);
    const double rhs = table.delta(a, Metric::SdWriteKbps);
    checks.push_back({"sd delta: reads > writes for " + to_string(a),
                      lhs > rhs, lhs, rhs});
  }
  void eth_zero(Metric m) {
    const double lhs = table.stat(ScenarioId::Baseline, m).mean;
    checks.push_back({to_string(m) + ": baseline is zero", lhs == 0, lhs, 0});
  }
  void eth_greater(Metric m, ScenarioId a, ScenarioId b) {
    const double lhs = table.stat(a, m).mean;
    const double rhs = table.stat(b, m).mean;
    checks.push_back({to_string(m) + " abs: " + to_string(a) + " > " +
                          to_string(b),
                      lhs > rhs, lhs, rhs});
  }
};

}  // namespace

std::vector<OrderingCheck> ordering_checks(const DeltaTable& table) {
  for (ScenarioId id : kAllScenarios)
    if (!table.has(id))
      throw IncompleteTableError("ordering checks need scenario " +
                                 to_string(id));

  using S = ScenarioId;
  CheckBuilder b{table, {}};

  // Memory: TCP holds more state than UDP; victims sit above compromised.
  b.greater(Metric::MemPct, S::CompromisedTcp, S::CompromisedUdp);
  b.greater(Metric::MemPct, S::VictimTcp, S::VictimUdp);
  b.greater(Metric::MemPct, S::VictimTcp, S::CompromisedTcp);
  b.greater(Metric::MemPct, S::VictimUdp, S::CompromisedUdp);

  // CPU: UDP outworks TCP per role; compromised rise, victims dip.
  b.greater(Metric::CpuPct, S::CompromisedUdp, S::CompromisedTcp);
  b.greater(Metric::CpuPct, S::VictimUdp, S::VictimTcp);
  b.above_baseline(Metric::CpuPct, S::CompromisedTcp);
  b.above_baseline(Metric::CpuPct, S::CompromisedUdp);
  b.below_baseline(Metric::CpuPct, S::VictimTcp);
  b.below_baseline(Metric::CpuPct, S::VictimUdp);
  b.greater(Metric::CpuPct, S::CompromisedTcp, S::VictimTcp);
  b.greater(Metric::CpuPct, S::CompromisedUdp, S::VictimUdp);

  // Energy: every attack role costs more than idle.
  b.above_baseline(Metric::PowerW, S::CompromisedTcp);
  b.above_baseline(Metric::PowerW, S::CompromisedUdp);
  b.above_baseline(Metric::PowerW, S::VictimTcp);
  b.above_baseline(Metric::PowerW, S::VictimUdp);
  b.greater(Metric::PowerW, S::CompromisedUdp, S::CompromisedTcp);
  b.greater(Metric::PowerW, S::VictimTcp, S::VictimUdp);
  b.greater(Metric::PowerW, S::VictimTcp, S::CompromisedTcp);
  b.greater(Metric::PowerW, S::CompromisedUdp, S::VictimUdp);

  // SD card: reads dominate writes; victims above compromised; TCP above UDP.
  b.reads_over_writes(S::CompromisedTcp);
  b.reads_over_writes(S::CompromisedUdp);
  b.reads_over_writes(S::VictimTcp);
  b.reads_over_writes(S::VictimUdp);
  b.greater(Metric::SdReadKbps, S::VictimTcp, S::CompromisedTcp);
  b.greater(Metric::SdReadKbps, S::VictimUdp, S::CompromisedUdp);
  b.greater(Metric::SdWriteKbps, S::VictimTcp, S::CompromisedTcp);
  b.greater(Metric::SdWriteKbps, S::VictimUdp, S::CompromisedUdp);
  b.greater(Metric::SdReadKbps, S::CompromisedTcp, S::CompromisedUdp);
  b.greater(Metric::SdReadKbps, S::VictimTcp, S::VictimUdp);
  b.greater(Metric::SdWriteKbps, S::CompromisedTcp, S::CompromisedUdp);
  b.greater(Metric::SdWriteKbps, S::VictimTcp, S::VictimUdp);

  // Ethernet: idle baseline is silent; senders out-write their victims.
  b.eth_zero(Metric::EthRxKbps);
  b.eth_zero(Metric::EthTxKbps);
  b.eth_greater(Metric::EthTxKbps, S::CompromisedTcp, S::VictimTcp);
  b.eth_greater(Metric::EthTxKbps, S::CompromisedUdp, S::VictimUdp);

  return std::move(b.checks);
}

void write_checks(std::ostream& out, const std::vector<OrderingCheck>& checks) {
  char line[256];
  for (const OrderingCheck& c : checks) {
    std::snprintf(line, sizeof(line), "%s %s (lhs=%.4f rhs=%.4f)\n",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.lhs, c.rhs);
    out << line;
  }
}

std::vector<ReportRow> build_report(const DeltaTable& table,
                                    const DeltaTargets* targets) {
  std::vector<ReportRow> rows;
  for (ScenarioId id : kAllScenarios) {
    if (!table.has(id)) continue;
    for (Metric metric : kAllMetrics) {
      ReportRow row;
      row.scenario = id;
      row.metric = metric;
      const AggregateStats& stats = table.stat(id, metric);
      row.mean = stats.mean;
      row.stdev = stats.stdev;
      if (metric == Metric::EthRxKbps || metric == Metric::EthTxKbps) {
        row.delta_or_abs = stats.mean;
      } else {
        row.delta_or_abs = table.delta(id, metric);
        if (targets != nullptr && id != ScenarioId::Baseline) {
          if (auto s = targets->values.find(id); s != targets->values.end())
            if (auto c = s->second.find(metric); c != s->second.end()) {
              row.residual_pp = row.delta_or_abs - c->second;
              row.has_residual = true;
            }
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "scenario,metric,mean,stdev,delta_pct_or_abs,residual_pp\n";
  char line[256];
  for (const ReportRow& r : rows) {
    std::snprintf(line, sizeof(line), "%s,%s,%.6f,%.6f,%.6f,",
                  to_string(r.scenario).c_str(), to_string(r.metric).c_str(),
                  r.mean, r.stdev, r.delta_or_abs);
    out << line;
    if (r.has_residual) {
      std::snprintf(line, sizeof(line), "%.6f", r.residual_pp);
      out << line;
    }
    out << "\n";
  }
}

std::vector<ReportRow> read_report_csv(std::istream& in) {
  std::vector<ReportRow> rows;
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("scenario,metric,", 0) != 0)
    throw ConfigError("not a report csv: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    ReportRow row;
    std::getline(fields, cell, ',');
    row.scenario = parse_scenario(cell);
    std::getline(fields, cell, ',');
    row.metric = parse_metric(cell);
    std::getline(fields, cell, ',');
    row.mean = std::stod(cell);
    std::getline(fields, cell, ',');
    row.stdev = std::stod(cell);
    std::getline(fields, cell, ',');
    row.delta_or_abs = std::stod(cell);
    if (std::getline(fields, cell, ',') && !cell.empty()) {
      row.residual_pp = std::stod(cell);
      row.has_residual = true;
    }
    rows.push_back(row);
  }
  return rows;
}

DeltaTable table_from_report(const std::vector<ReportRow>& rows) {
  DeltaTable table;
  for (const ReportRow& r : rows)
    table.set(r.scenario, r.metric, {r.mean, r.stdev, 0});
  return table;
}

}  // namespace miraisim
