#include "miraisim/telemetry.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "miraisim/errors.hpp"

namespace miraisim {

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::CpuPct: return "cpu_pct";
    case Metric::MemPct: return "mem_pct";
    case Metric::PowerW: return "power_w";
    case Metric::SdReadKbps: return "sd_read_kbps";
    case Metric::SdWriteKbps: return "sd_write_kbps";
    case Metric::EthRxKbps: return "eth_rx_kbps";
    case Metric::EthTxKbps: return "eth_tx_kbps";
  }
  return "?";
}

Metric parse_metric(std::string_view text) {
  for (Metric metric : kAllMetrics)
    if (to_string(metric) == text) return metric;
  throw ConfigError("unknown metric '" + std::string(text) + "'");
}

bool is_percentage(Metric metric) {
  return metric == Metric::CpuPct || metric == Metric::MemPct;
}

bool is_rate(Metric metric) {
  return metric == Metric::SdReadKbps || metric == Metric::SdWriteKbps ||
         metric == Metric::EthRxKbps || metric == Metric::EthTxKbps;
}

const MetricModel& ResourceModelParams::model(Metric metric) const {
  switch (metric) {
    case Metric::CpuPct: return cpu_pct;
    case Metric::MemPct: return mem_pct;
    case Metric::PowerW: return power_w;
    case Metric::SdReadKbps: return sd_read_kbps;
    case Metric::SdWriteKbps: return sd_write_kbps;
    default: throw SimError("metric has no model: " + to_string(metric));
  }
}

MetricModel& ResourceModelParams::model(Metric metric) {
  return const_cast<MetricModel&>(
      static_cast<const ResourceModelParams*>(this)->model(metric));
}

ResourceModelParams ResourceModelParams::defaults() {
  ResourceModelParams params;
  params.cpu_pct.base = 10.0;
  params.mem_pct.base = 40.0;
  params.power_w.base = 2.0;
  params.sd_read_kbps.base = 40.0;
  params.sd_write_kbps.base = 30.0;
  return params;
}

namespace {

nlohmann::json model_to_json(const MetricModel& m) {
  return {{"base", m.base}, {"c_tx", m.c_tx}, {"c_rx", m.c_rx},
          {"c_conn", m.c_conn}, {"c_log", m.c_log}};
}

MetricModel model_from_json(const nlohmann::json& j) {
  MetricModel m;
  m.base = j.at("base").get<double>();
  m.c_tx = j.at("c_tx").get<double>();
  m.c_rx = j.at("c_rx").get<double>();
  m.c_conn = j.at("c_conn").get<double>();
  m.c_log = j.at("c_log").get<double>();
  return m;
}

}  // namespace

std::string ResourceModelParams::to_json() const {
  nlohmann::json j;
  for (Metric metric : kModeledMetrics)
    j[to_string(metric)] = model_to_json(model(metric));
  return j.dump(2) + "\n";
}

ResourceModelParams ResourceModelParams::from_json(const std::string& text) {
  ResourceModelParams params;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    for (Metric metric : kModeledMetrics)
      params.model(metric) = model_from_json(j.at(to_string(metric)));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad model params json: ") + e.what());
  }
  return params;
}

void ResourceModelParams::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << to_json();
}

ResourceModelParams ResourceModelParams::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

double metric_eval(const ResourceModelParams& params, Metric metric,
                   const DriverVector& drivers) {
  double value = params.model(metric).raw_eval(drivers);
  if (is_percentage(metric)) return std::clamp(value, 0.0, 100.0);
  return std::max(value, 0.0);
}

double ResourceSample::field(Metric metric) const {
  switch (metric) {
    case Metric::CpuPct: return cpu_pct;
    case Metric::MemPct: return mem_pct;
    case Metric::PowerW: return power_w;
    case Metric::SdReadKbps: return sd_read_kbps;
    case Metric::SdWriteKbps: return sd_write_kbps;
    case Metric::EthRxKbps: return eth_rx_kbps;
    case Metric::EthTxKbps: return eth_tx_kbps;
  }
  throw SimError("bad metric field");
}

double& ResourceSample::field(Metric metric) {
  switch (metric) {
    case Metric::CpuPct: return cpu_pct;
    case Metric::MemPct: return mem_pct;
    case Metric::PowerW: return power_w;
    case Metric::SdReadKbps: return sd_read_kbps;
    case Metric::SdWriteKbps: return sd_write_kbps;
    case Metric::EthRxKbps: return eth_rx_kbps;
    case Metric::EthTxKbps: return eth_tx_kbps;
  }
  throw SimError("bad metric field");
}

void NodeTelemetry::note_wire_tx(const Packet& packet) {
  window_eth_tx_bytes_ += wire_bytes(packet);
}

void NodeTelemetry::note_rx(const Packet& packet) {
  ++window_rx_packets_;
  window_eth_rx_bytes_ += wire_bytes(packet);
}

ResourceSample NodeTelemetry::sample(SimTime t) {
  if (params_ == nullptr) throw SimError("telemetry sampled without params");
  const double window_s = to_seconds(cadence_);
  DriverVector d;
  d.tx_pps = static_cast<double>(window_tx_packets_) / window_s;
  d.rx_pps = static_cast<double>(window_rx_packets_) / window_s;
  d.tcp_states = tcp_states_;
  d.log_kbps = static_cast<double>(window_log_bytes_) * 8.0 / 1000.0 / window_s;

  ResourceSample s;
  s.t = t;
  s.cpu_pct = metric_eval(*params_, Metric::CpuPct, d);
  s.mem_pct = metric_eval(*params_, Metric::MemPct, d);
  s.sd_read_kbps = metric_eval(*params_, Metric::SdReadKbps, d);
  s.sd_write_kbps = metric_eval(*params_, Metric::SdWriteKbps, d);
  // Drivers are window constants, so every 1 kHz sub-sample inside the
  // window evaluates to the same wattage; the mean collapses to one eval.
  const std::uint64_t subs = std::max<SimTime>(cadence_ / 1000, 1);
  s.power_w = metric_eval(*params_, Metric::PowerW, d);
  power_subsamples_ += subs;
  s.eth_tx_kbps =
      static_cast<double>(window_eth_tx_bytes_) * 8.0 / 1000.0 / window_s;
  s.eth_rx_kbps =
      static_cast<double>(window_eth_rx_bytes_) * 8.0 / 1000.0 / window_s;

  window_tx_packets_ = 0;
  window_rx_packets_ = 0;
  window_eth_tx_bytes_ = 0;
  window_eth_rx_bytes_ = 0;
  window_log_bytes_ = 0;
  samples_.push_back(s);
  drivers_.push_back(d);
  return s;
}

SampleSeries normalize_series(const SampleSeries& raw,
                              const SampleSeries& overhead) {
  if (raw.size() != overhead.size())
    throw SeriesLengthMismatchError(
        "normalize_series: " + std::to_string(raw.size()) + " vs " +
        std::to_string(overhead.size()) + " samples");
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (raw[i].t != overhead[i].t)
      throw SeriesLengthMismatchError("normalize_series: timestamps diverge");
  if (raw.empty()) return {};

  std::array<double, kMetricCount> overhead_mean{};
  for (const ResourceSample& s : overhead)
    for (int i = 0; i < kMetricCount; ++i)
      overhead_mean[i] += s.field(kAllMetrics[i]);
  for (double& v : overhead_mean) v /= static_cast<double>(overhead.size());

  SampleSeries out = raw;
  for (ResourceSample& s : out) {
    for (int i = 0; i < kMetricCount; ++i) {
      const Metric metric = kAllMetrics[i];
      double v = s.field(metric) - overhead_mean[i];
      if (is_rate(metric)) v = std::max(v, 0.0);
      s.field(metric) = v;
    }
  }
  return out;
}

SampleSeries make_overhead_series(const ResourceModelParams& params,
                                  double fraction, std::size_t length,
                                  SimTime cadence) {
  SampleSeries out;
  out.reserve(length);
  for (std::size_t k = 1; k <= length; ++k) {
    ResourceSample s;
    s.t = static_cast<SimTime>(k) * cadence;
    for (Metric metric : kModeledMetrics)
      s.field(metric) = fraction * params.model(metric).base;
    out.push_back(s);
  }
  return out;
}

double energy_joules(const SampleSeries& series, SimTime cadence) {
  double joules = 0;
  for (const ResourceSample& s : series) joules += s.power_w * to_seconds(cadence);
  return joules;
}

void write_samples_csv(std::ostream& out, const SampleSeries& series) {
  out << "t_ms,cpu_pct,mem_pct,power_w,sd_read_kbps,sd_write_kbps,"
         "eth_rx_kbps,eth_tx_kbps\n";
  char row[256];
  for (const ResourceSample& s : series) {
    std::snprintf(row, sizeof(row),
                  "%llu,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f\n",
                  static_cast<unsigned long long>(s.t / 1000), s.cpu_pct,
                  s.mem_pct, s.power_w, s.sd_read_kbps, s.sd_write_kbps,
                  s.eth_rx_kbps, s.eth_tx_kbps);
    out << row;
  }
}

void write_samples_csv(const std::string& path, const SampleSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  write_samples_csv(out, series);
}

}  // namespace miraisim
