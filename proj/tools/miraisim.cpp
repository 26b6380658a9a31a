// Command line front end: run / suite / calibrate / check / trace-export.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "miraisim/analysis.hpp"
#include "miraisim/config.hpp"
#include "miraisim/errors.hpp"
#include "miraisim/pcap.hpp"
#include "miraisim/scenario.hpp"
#include "miraisim/suite.hpp"

namespace fs = std::filesystem;
using namespace miraisim;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string params_path;
  std::string preset;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_preset) {
  cmd->add_option("--config", opts.config_path, "Scenario config (INI)");
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--seed", opts.seed, "Seed override");
  cmd->add_option("--params", opts.params_path, "Model params json");
  if (with_preset)
    cmd->add_option("--preset", opts.preset, "Flood preset override")
        ->check(CLI::IsMember({"paper-udp", "paper-tcp"}));
}

ScenarioConfig resolve_config(const CommonOpts& opts) {
  ScenarioConfig config = opts.config_path.empty()
                              ? suite_config(opts.seed.value_or(1))
                              : load_config(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;
  if (!opts.preset.empty()) {
    config.flood.reset();
    config.flood_preset = opts.preset;
  }
  config.validate();
  return config;
}

// "calibrated" re-fits against the built-in reference targets on this
// config before the run; a path loads a saved fit.
ResourceModelParams resolve_params(const CommonOpts& opts,
                                   const ScenarioConfig& config) {
  if (!opts.params_path.empty()) return ResourceModelParams::load(opts.params_path);
  const std::string& source = config.telemetry.params_source;
  if (source == "default") return ResourceModelParams::defaults();
  if (source == "calibrated") {
    const auto fit = calibrate_from_runs(config, DeltaTargets::reference(),
                                         ResourceModelParams::defaults());
    return fit.params;
  }
  return ResourceModelParams::load(source);
}

fs::path ensure_out(const std::string& dir) {
  fs::path path(dir);
  fs::create_directories(path);
  return path;
}

void write_records_csv(const fs::path& path,
                       const std::vector<TraceRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "t_us,src,dst,src_port,dst_port,protocol,kind,payload_bytes,seq\n";
  for (const TraceRecord& r : records) {
    out << r.timestamp << ',' << to_string(r.packet.src) << ','
        << to_string(r.packet.dst) << ',' << r.packet.src_port << ','
        << r.packet.dst_port << ',' << to_string(r.packet.protocol) << ','
        << to_string(r.packet.kind) << ',' << r.packet.payload_bytes << ','
        << r.packet.seq << '\n';
  }
}

std::vector<TraceRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("t_us,src,dst,", 0) != 0)
    throw ConfigError(path + ": not a records csv");
  std::vector<TraceRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    auto next = [&] {
      if (!std::getline(fields, cell, ','))
        throw ConfigError(path + ":" + std::to_string(line_no) +
                          ": truncated row");
      return cell;
    };
    TraceRecord r;
    r.timestamp = std::stoull(next());
    r.packet.src = parse_ipv4(next());
    r.packet.dst = parse_ipv4(next());
    r.packet.src_port = static_cast<std::uint16_t>(std::stoul(next()));
    r.packet.dst_port = static_cast<std::uint16_t>(std::stoul(next()));
    r.packet.protocol = parse_protocol(next());
    r.packet.kind = parse_packet_kind(next());
    r.packet.payload_bytes = static_cast<std::uint32_t>(std::stoul(next()));
    r.packet.seq = std::stoull(next());
    records.push_back(r);
  }
  return records;
}

void print_checks(const std::vector<OrderingCheck>& checks) {
  std::size_t failed = 0;
  for (const OrderingCheck& c : checks)
    if (!c.passed) ++failed;
  write_checks(std::cout, checks);
  std::printf("%zu/%zu relations hold\n", checks.size() - failed,
              checks.size());
}

int cmd_run(const CommonOpts& opts) {
  const ScenarioConfig config = resolve_config(opts);
  const ResourceModelParams params = resolve_params(opts, config);
  const ScenarioResult result = run_scenario(config, params);

  const fs::path out = ensure_out(opts.out_dir);
  for (const NodeResult& node : result.nodes)
    write_samples_csv((out / ("samples_run_" + node.name + ".csv")).string(),
                      node.raw_samples);
  write_trace((out / "trace_run.pcap").string(), result.trace);
  write_records_csv(out / "records_run.csv", result.trace);

  std::printf("events processed:   %llu\n",
              static_cast<unsigned long long>(result.events_processed));
  std::printf("packets on wire:    %llu\n",
              static_cast<unsigned long long>(result.wire_sent_total));
  std::printf("packets delivered:  %llu\n",
              static_cast<unsigned long long>(result.delivered_total));
  std::printf("packets dropped:    %llu\n",
              static_cast<unsigned long long>(result.dropped_total));
  std::printf("trace records:      %zu\n", result.trace.size());
  std::printf("infected devices:   %u\n",
              result.infection_timeline.empty()
                  ? 0u
                  : result.infection_timeline.back().second);
  std::printf("outputs in %s\n", out.string().c_str());
  return 0;
}

int cmd_suite(const CommonOpts& opts) {
  const ScenarioConfig config = resolve_config(opts);
  const ResourceModelParams params = resolve_params(opts, config);
  const SuiteOutputs outputs = run_suite(config, params);

  const fs::path out = ensure_out(opts.out_dir);
  const struct {
    ScenarioId id;
    const ScenarioResult* run;
    const char* node;
  } sources[] = {
      {ScenarioId::Baseline, &outputs.baseline_run, "victim"},
      {ScenarioId::CompromisedTcp, &outputs.tcp_run, "attacker"},
      {ScenarioId::CompromisedUdp, &outputs.udp_run, "attacker"},
      {ScenarioId::VictimTcp, &outputs.tcp_run, "victim"},
      {ScenarioId::VictimUdp, &outputs.udp_run, "victim"},
  };
  for (const auto& s : sources)
    write_samples_csv((out / ("samples_" + to_string(s.id) + "_" + s.node +
                              ".csv")).string(),
                      s.run->node(s.node).raw_samples);
  write_trace((out / "trace_baseline.pcap").string(),
              outputs.baseline_run.trace);
  write_trace((out / "trace_tcp.pcap").string(), outputs.tcp_run.trace);
  write_trace((out / "trace_udp.pcap").string(), outputs.udp_run.trace);

  const DeltaTargets targets = DeltaTargets::reference();
  const auto rows = build_report(outputs.table, &targets);
  std::ofstream report(out / "report.csv", std::ios::binary);
  write_report_csv(report, rows);

  const auto checks = ordering_checks(outputs.table);
  std::ofstream checks_out(out / "checks.txt", std::ios::binary);
  write_checks(checks_out, checks);

  for (ScenarioId id : kAttackScenarios)
    for (Metric metric : kModeledMetrics)
      std::printf("%-16s %-14s %+9.4f%%\n", to_string(id).c_str(),
                  to_string(metric).c_str(), outputs.table.delta(id, metric));
  print_checks(checks);
  std::printf("outputs in %s\n", out.string().c_str());
  return 0;
}

int cmd_calibrate(const CommonOpts& opts, const std::string& targets_path) {
  const ScenarioConfig config = resolve_config(opts);
  DeltaTargets targets = DeltaTargets::reference();
  if (!targets_path.empty()) {
    std::ifstream in(targets_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + targets_path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("scenario,metric,", 0) != 0)
      throw ConfigError(targets_path + ": expected scenario,metric,delta_pct");
    targets.values.clear();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream fields(line);
      std::string scenario, metric, value;
      std::getline(fields, scenario, ',');
      std::getline(fields, metric, ',');
      std::getline(fields, value, ',');
      targets.values[parse_scenario(scenario)][parse_metric(metric)] =
          std::stod(value);
    }
  }

  const auto fit = calibrate_from_runs(config, targets,
                                       ResourceModelParams::defaults());
  const fs::path out = ensure_out(opts.out_dir);
  fit.params.save((out / "params.json").string());

  for (const auto& [id, metrics] : fit.residual_pp)
    for (const auto& [metric, residual] : metrics)
      std::printf("%-16s %-14s residual %+.3e pp\n", to_string(id).c_str(),
                  to_string(metric).c_str(), residual);
  std::printf("max |residual| = %.3e pp\n", fit.max_abs_residual_pp);
  std::printf("params written to %s\n", (out / "params.json").string().c_str());
  return 0;
}

int cmd_check(const CommonOpts& opts, const std::string& report_path) {
  std::vector<OrderingCheck> checks;
  if (!report_path.empty()) {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + report_path);
    checks = ordering_checks(table_from_report(read_report_csv(in)));
  } else {
    const ScenarioConfig config = resolve_config(opts);
    const ResourceModelParams params = resolve_params(opts, config);
    checks = ordering_checks(run_suite(config, params).table);
  }

  const fs::path out = ensure_out(opts.out_dir);
  std::ofstream checks_out(out / "checks.txt", std::ios::binary);
  write_checks(checks_out, checks);
  print_checks(checks);
  for (const OrderingCheck& c : checks)
    if (!c.passed) return 1;
  return 0;
}

int cmd_trace_export(const std::string& records_path,
                     const std::string& out_dir) {
  const auto records = read_records_csv(records_path);
  const fs::path out = ensure_out(out_dir);
  const auto bytes = write_trace((out / "trace_export.pcap").string(), records);
  std::printf("%zu records, %llu bytes -> %s\n", records.size(),
              static_cast<unsigned long long>(bytes),
              (out / "trace_export.pcap").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic botnet lifecycle and flood impact simulator"};
  app.require_subcommand(1);

  CommonOpts run_opts, suite_opts, calibrate_opts, check_opts;
  std::string targets_path, report_path, records_path, export_out = ".";

  CLI::App* run = app.add_subcommand("run", "Simulate one scenario");
  add_common(run, run_opts, true);

  CLI::App* suite = app.add_subcommand(
      "suite", "Run the five reported scenarios and emit report.csv");
  add_common(suite, suite_opts, false);

  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Fit model coefficients to a delta target table");
  add_common(calibrate, calibrate_opts, false);
  calibrate->add_option("--targets", targets_path,
                        "Target csv (scenario,metric,delta_pct)");

  CLI::App* check = app.add_subcommand(
      "check", "Evaluate the ordering relations; nonzero exit on failure");
  add_common(check, check_opts, false);
  check->add_option("--report", report_path,
                    "Evaluate a stored report.csv instead of running");

  CLI::App* trace_export = app.add_subcommand(
      "trace-export", "Rebuild a pcap from a stored records csv");
  trace_export->add_option("--records", records_path, "records_run.csv path")
      ->required();
  trace_export->add_option("--out", export_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (suite->parsed()) return cmd_suite(suite_opts);
    if (calibrate->parsed()) return cmd_calibrate(calibrate_opts, targets_path);
    if (check->parsed()) return cmd_check(check_opts, report_path);
    if (trace_export->parsed())
      return cmd_trace_export(records_path, export_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
