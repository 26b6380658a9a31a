#ifndef MIRAISIM_TELEMETRY_HPP
#define MIRAISIM_TELEMETRY_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "miraisim/packet.hpp"
#include "miraisim/sim_time.hpp"

namespace miraisim {

enum class Metric : std::uint8_t {
  CpuPct,
  MemPct,
  PowerW,
  SdReadKbps,
  SdWriteKbps,
  EthRxKbps,
  EthTxKbps,
};

// The first five are coefficient-driven; the Ethernet pair is measured.
constexpr int kModeledMetricCount = 5;
constexpr int kMetricCount = 7;
constexpr std::array<Metric, kModeledMetricCount> kModeledMetrics = {
    Metric::CpuPct, Metric::MemPct, Metric::PowerW, Metric::SdReadKbps,
    Metric::SdWriteKbps};
constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::CpuPct,     Metric::MemPct,    Metric::PowerW,
    Metric::SdReadKbps, Metric::SdWriteKbps, Metric::EthRxKbps,
    Metric::EthTxKbps};

std::string to_string(Metric metric);
Metric parse_metric(std::string_view text);
bool is_percentage(Metric metric);
bool is_rate(Metric metric);

struct DriverVector {
  double tx_pps = 0;        // packets offered for transmission per second
  double rx_pps = 0;        // packets delivered per second
  double tcp_states = 0;    // live connection-state count
  double log_kbps = 0;      // capture/logging write rate
};

struct MetricModel {
  double base = 0;
  double c_tx = 0;
  double c_rx = 0;
  double c_conn = 0;
  double c_log = 0;

  double raw_eval(const DriverVector& d) const {
    return base + c_tx * d.tx_pps + c_rx * d.rx_pps + c_conn * d.tcp_states +
           c_log * d.log_kbps;
  }
};

struct ResourceModelParams {
  MetricModel cpu_pct;
  MetricModel mem_pct;
  MetricModel power_w;
  MetricModel sd_read_kbps;
  MetricModel sd_write_kbps;

  const MetricModel& model(Metric metric) const;
  MetricModel& model(Metric metric);

  // Idle envelope with zero coefficients; calibration fills the rest.
  static ResourceModelParams defaults();

  std::string to_json() const;
  static ResourceModelParams from_json(const std::string& text);
  void save(const std::string& path) const;
  static ResourceModelParams load(const std::string& path);
};

// Clamped to [0,100] for percentage metrics and [0, inf) otherwise.
double metric_eval(const ResourceModelParams& params, Metric metric,
                   const DriverVector& drivers);

struct ResourceSample {
  SimTime t = 0;
  double cpu_pct = 0;
  double mem_pct = 0;
  double power_w = 0;
  double sd_read_kbps = 0;
  double sd_write_kbps = 0;
  double eth_rx_kbps = 0;
  double eth_tx_kbps = 0;

  double field(Metric metric) const;
  double& field(Metric metric);
};

using SampleSeries = std::vector<ResourceSample>;

// Per-node accumulator. The scenario engine feeds packet and log events into
// the current window; sample() closes the window ending at t.
class NodeTelemetry {
 public:
  NodeTelemetry() = default;
  NodeTelemetry(SimTime cadence, const ResourceModelParams* params)
      : cadence_(cadence), params_(params) {}

  void note_app_tx(std::uint32_t count = 1) { window_tx_packets_ += count; }
  void note_wire_tx(const Packet& packet);
  void note_rx(const Packet& packet);
  void note_log(std::uint64_t bytes) { window_log_bytes_ += bytes; }
  void set_tcp_states(std::uint32_t count) { tcp_states_ = count; }

  // Closes the window [t - cadence, t). Power is averaged over 1 kHz
  // sub-sample instants inside the window.
  ResourceSample sample(SimTime t);

  const SampleSeries& samples() const { return samples_; }
  const std::vector<DriverVector>& driver_series() const { return drivers_; }
  std::uint64_t power_subsamples() const { return power_subsamples_; }

 private:
  SimTime cadence_ = milliseconds(100);
  const ResourceModelParams* params_ = nullptr;
  std::uint32_t tcp_states_ = 0;
  std::uint64_t window_tx_packets_ = 0;
  std::uint64_t window_rx_packets_ = 0;
  std::uint64_t window_eth_tx_bytes_ = 0;
  std::uint64_t window_eth_rx_bytes_ = 0;
  std::uint64_t window_log_bytes_ = 0;
  std::uint64_t power_subsamples_ = 0;
  SampleSeries samples_;
  std::vector<DriverVector> drivers_;
};

// Subtracts the overhead series' per-metric means from every raw sample.
// Rate metrics are floored at zero. Series must be equal length with
// aligned timestamps.
SampleSeries normalize_series(const SampleSeries& raw,
                              const SampleSeries& overhead);

// Constant harness-cost series: each modeled metric sits at
// fraction * base, Ethernet at zero.
SampleSeries make_overhead_series(const ResourceModelParams& params,
                                  double fraction, std::size_t length,
                                  SimTime cadence);

// Mean power times elapsed time, in joules.
double energy_joules(const SampleSeries& series, SimTime cadence);

// Header `t_ms,cpu_pct,...`, fixed 3-decimal fields, newline-terminated rows.
void write_samples_csv(std::ostream& out, const SampleSeries& series);
void write_samples_csv(const std::string& path, const SampleSeries& series);

}  // namespace miraisim

#endif
