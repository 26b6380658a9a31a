#include <doctest.h>

#include <sstream>
#include <string>

#include "miraisim/errors.hpp"
#include "miraisim/telemetry.hpp"

using namespace miraisim;

namespace {

Packet udp_data(std::uint32_t payload) {
  Packet p;
  p.src = parse_ipv4("10.0.0.10");
  p.dst = parse_ipv4("10.0.0.20");
  p.src_port = 40'000;
  p.dst_port = 5'201;
  p.protocol = Protocol::Udp;
  p.kind = PacketKind::Data;
  p.payload_bytes = payload;
  return p;
}

}  // namespace

TEST_CASE("metric eval is the base value on an idle device") {
  const ResourceModelParams params = ResourceModelParams::defaults();
  const DriverVector idle;
  CHECK(metric_eval(params, Metric::CpuPct, idle) == 10.0);
  CHECK(metric_eval(params, Metric::MemPct, idle) == 40.0);
  CHECK(metric_eval(params, Metric::PowerW, idle) == 2.0);
  CHECK(metric_eval(params, Metric::SdReadKbps, idle) == 40.0);
  CHECK(metric_eval(params, Metric::SdWriteKbps, idle) == 30.0);
}

TEST_CASE("metric eval is linear in the drivers below the clamps") {
  ResourceModelParams params = ResourceModelParams::defaults();
  params.cpu_pct.base = 5.0;
  params.cpu_pct.c_tx = 0.001;
  DriverVector d;
  d.tx_pps = 10'000;
  CHECK(metric_eval(params, Metric::CpuPct, d) == doctest::Approx(15.0));

  params.cpu_pct.c_rx = 0.002;
  params.cpu_pct.c_conn = 0.5;
  params.cpu_pct.c_log = 0.01;
  d.rx_pps = 1'000;
  d.tcp_states = 4;
  d.log_kbps = 100;
  CHECK(metric_eval(params, Metric::CpuPct, d) ==
        doctest::Approx(5.0 + 10.0 + 2.0 + 2.0 + 1.0));
}

TEST_CASE("percentages clamp to [0, 100] and rates floor at zero") {
  ResourceModelParams params = ResourceModelParams::defaults();
  params.cpu_pct.c_tx = 1.0;
  params.mem_pct.c_tx = -1.0;
  params.power_w.c_tx = 1.0;
  params.sd_read_kbps.c_tx = -1.0;
  DriverVector d;
  d.tx_pps = 1'000;
  CHECK(metric_eval(params, Metric::CpuPct, d) == 100.0);
  CHECK(metric_eval(params, Metric::MemPct, d) == 0.0);
  CHECK(metric_eval(params, Metric::SdReadKbps, d) == 0.0);
  // Power has no ceiling.
  CHECK(metric_eval(params, Metric::PowerW, d) == doctest::Approx(1'002.0));
}

TEST_CASE("telemetry windows convert counts into per-second drivers") {
  ResourceModelParams params = ResourceModelParams::defaults();
  params.cpu_pct.c_tx = 0.01;
  NodeTelemetry telemetry(milliseconds(100), &params);

  telemetry.note_app_tx(50);
  for (int i = 0; i < 20; ++i) telemetry.note_rx(udp_data(1200));
  telemetry.note_log(2'500);  // bytes
  telemetry.set_tcp_states(6);

  const ResourceSample s = telemetry.sample(milliseconds(100));
  REQUIRE(telemetry.driver_series().size() == 1);
  const DriverVector& d = telemetry.driver_series()[0];
  CHECK(d.tx_pps == doctest::Approx(500.0));
  CHECK(d.rx_pps == doctest::Approx(200.0));
  CHECK(d.tcp_states == doctest::Approx(6.0));
  CHECK(d.log_kbps == doctest::Approx(2'500 * 8.0 / 1000.0 / 0.1));
  CHECK(s.cpu_pct == doctest::Approx(10.0 + 0.01 * 500.0));
  // 20 UDP frames of 42 + 1200 bytes in a 100 ms window.
  CHECK(s.eth_rx_kbps == doctest::Approx(20 * 1242 * 8.0 / 1000.0 / 0.1));
  CHECK(s.eth_tx_kbps == 0.0);

  // The window resets; the connection gauge persists.
  const ResourceSample quiet = telemetry.sample(milliseconds(200));
  CHECK(telemetry.driver_series()[1].tx_pps == 0.0);
  CHECK(telemetry.driver_series()[1].tcp_states == doctest::Approx(6.0));
  CHECK(quiet.eth_rx_kbps == 0.0);
  CHECK(telemetry.samples().size() == 2);
}

TEST_CASE("power integrates one sub-sample per millisecond") {
  const ResourceModelParams params = ResourceModelParams::defaults();
  NodeTelemetry telemetry(milliseconds(100), &params);
  for (int k = 1; k <= 600; ++k) telemetry.sample(k * milliseconds(100));
  CHECK(telemetry.power_subsamples() == 60'000);  // 1 kHz over 60 s
  CHECK(energy_joules(telemetry.samples(), milliseconds(100)) ==
        doctest::Approx(120.0));  // 2 W for 60 s
}

TEST_CASE("normalization subtracts the overhead mean per metric") {
  const ResourceModelParams params = ResourceModelParams::defaults();
  const SampleSeries overhead =
      make_overhead_series(params, 0.01, 5, milliseconds(100));
  REQUIRE(overhead.size() == 5);
  CHECK(overhead[0].t == milliseconds(100));
  CHECK(overhead[4].t == milliseconds(500));
  CHECK(overhead[2].cpu_pct == doctest::Approx(0.1));
  CHECK(overhead[2].mem_pct == doctest::Approx(0.4));
  CHECK(overhead[2].power_w == doctest::Approx(0.02));
  CHECK(overhead[2].eth_rx_kbps == 0.0);

  SampleSeries raw = overhead;
  for (ResourceSample& s : raw) {
    s.cpu_pct = 10.0;
    s.mem_pct = 0.0;
    s.power_w = 0.0;
    s.sd_read_kbps = 0.2;
    s.eth_rx_kbps = 5.0;
  }
  const SampleSeries normalized = normalize_series(raw, overhead);
  CHECK(normalized[0].cpu_pct == doctest::Approx(9.9));
  CHECK(normalized[0].mem_pct == doctest::Approx(-0.4));
  CHECK(normalized[0].power_w == doctest::Approx(-0.02));
  CHECK(normalized[0].sd_read_kbps == 0.0);  // rates cannot go negative
  CHECK(normalized[0].sd_write_kbps == 0.0);
  CHECK(normalized[0].eth_rx_kbps == doctest::Approx(5.0));

  // Normalizing a series against itself zeroes every rate and percentage.
  const SampleSeries self = normalize_series(overhead, overhead);
  CHECK(self[3].cpu_pct == doctest::Approx(0.0));
  CHECK(self[3].sd_write_kbps == 0.0);
}

TEST_CASE("normalization rejects misaligned series") {
  const ResourceModelParams params = ResourceModelParams::defaults();
  const SampleSeries overhead =
      make_overhead_series(params, 0.01, 5, milliseconds(100));
  SampleSeries shorter(overhead.begin(), overhead.end() - 1);
  CHECK_THROWS_AS(normalize_series(shorter, overhead),
                  SeriesLengthMismatchError);

  SampleSeries shifted = overhead;
  shifted[2].t += 1;
  CHECK_THROWS_AS(normalize_series(shifted, overhead),
                  SeriesLengthMismatchError);
  CHECK(normalize_series({}, {}).empty());
}

TEST_CASE("model params survive a json round trip") {
  ResourceModelParams params = ResourceModelParams::defaults();
  params.cpu_pct.c_tx = 1.25e-3;
  params.power_w.c_log = 7.5e-6;
  const ResourceModelParams back =
      ResourceModelParams::from_json(params.to_json());
  for (Metric metric : kModeledMetrics) {
    CHECK(back.model(metric).base == params.model(metric).base);
    CHECK(back.model(metric).c_tx == params.model(metric).c_tx);
    CHECK(back.model(metric).c_log == params.model(metric).c_log);
  }
  CHECK_THROWS_AS(ResourceModelParams::from_json("{\"cpu_pct\":{}}"),
                  ConfigError);
  CHECK_THROWS_AS(ResourceModelParams::from_json("not json"), ConfigError);
}

TEST_CASE("sample csv uses the fixed header and three decimals") {
  SampleSeries series;
  ResourceSample s;
  s.t = milliseconds(100);
  s.cpu_pct = 10.0;
  s.mem_pct = 40.0;
  s.power_w = 2.0;
  s.sd_read_kbps = 40.0;
  s.sd_write_kbps = 30.0;
  s.eth_rx_kbps = 119.232;
  s.eth_tx_kbps = 0.0;
  series.push_back(s);

  std::ostringstream out;
  write_samples_csv(out, series);
  CHECK(out.str() ==
        "t_ms,cpu_pct,mem_pct,power_w,sd_read_kbps,sd_write_kbps,"
        "eth_rx_kbps,eth_tx_kbps\n"
        "100,10.000,40.000,2.000,40.000,30.000,119.232,0.000\n");
}

TEST_CASE("metric names round trip and classify") {
  for (Metric metric : kAllMetrics)
    CHECK(parse_metric(to_string(metric)) == metric);
  CHECK_THROWS_AS(parse_metric("disk_iops"), ConfigError);
  CHECK(is_percentage(Metric::CpuPct));
  CHECK(is_percentage(Metric::MemPct));
  CHECK_FALSE(is_percentage(Metric::PowerW));
  CHECK(is_rate(Metric::SdReadKbps));
  CHECK(is_rate(Metric::EthTxKbps));
  CHECK_FALSE(is_rate(Metric::PowerW));
}
