#include "miraisim/flood.hpp"

#include <algorithm>

#include "miraisim/errors.hpp"

namespace miraisim {

void validate(const FloodSpec& spec) {
  if (spec.per_stream_rate_bps == 0)
    throw InvalidSpecError("flood spec: per-stream rate must be positive");
  if (spec.payload_bytes == 0)
    throw InvalidSpecError("flood spec: payload must be positive");
  if (spec.parallel_streams == 0)
    throw InvalidSpecError("flood spec: stream count must be positive");
  if (spec.duration == 0)
    throw InvalidSpecError("flood spec: duration must be positive");
  if (spec.payload_bytes > 65'507)
    throw InvalidSpecError("flood spec: payload exceeds datagram limit");
}

std::optional<FloodSpec> flood_preset(std::string_view name, Ipv4Address target,
                                      std::uint16_t target_port) {
  FloodSpec spec;
  spec.target = target;
  spec.target_port = target_port;
  spec.per_stream_rate_bps = 30'000'000;
  spec.payload_bytes = 1200;
  spec.parallel_streams = 6;
  spec.duration = seconds(60);
  if (name == "paper-udp") {
    spec.protocol = Protocol::Udp;
    return spec;
  }
  if (name == "paper-tcp") {
    spec.protocol = Protocol::Tcp;
    return spec;
  }
  return std::nullopt;
}

std::uint64_t UdpSchedule::packets_within(SimTime duration) const {
  // Emissions sit at k * gap for k = 0, 1, ...; count k with emit_offset(k) < duration.
  std::uint64_t count = 0;
  const std::uint64_t gap_num = payload_bytes * 8 * kMicrosPerSecond;
  // emit_offset(k) = k * gap_num / rate_bps < duration  <=>  k * gap_num < duration * rate_bps
  // (integer division truncates, so solve on the exact products).
  // k < duration * rate_bps / gap_num, i.e. count = ceil of that bound.
  const unsigned __int128 bound =
      static_cast<unsigned __int128>(duration) * rate_bps;
  count = static_cast<std::uint64_t>((bound + gap_num - 1) / gap_num);
  return count;
}

TcpConn make_tcp_conn(std::uint32_t mss, SimTime srtt) {
  TcpConn conn;
  conn.mss = mss;
  conn.srtt = srtt;
  conn.cwnd = mss;            // initial window of one segment
  conn.ssthresh = 64ull * mss;
  conn.phase = TcpPhase::SlowStart;
  return conn;
}

void tcp_cwnd_update(TcpConn& conn, AckEvent ack) {
  if (conn.in_flight >= ack.bytes)
    conn.in_flight -= ack.bytes;
  else
    conn.in_flight = 0;

  if (conn.phase == TcpPhase::SlowStart) {
    conn.cwnd += conn.mss;
    if (conn.cwnd >= conn.ssthresh) {
      conn.cwnd = conn.ssthresh;
      conn.phase = TcpPhase::CongestionAvoidance;
      conn.bytes_acked_in_window = 0;
    }
    return;
  }
  conn.bytes_acked_in_window += ack.bytes;
  if (conn.bytes_acked_in_window >= conn.cwnd) {
    conn.bytes_acked_in_window -= conn.cwnd;
    conn.cwnd += conn.mss;
  }
}

void tcp_cwnd_update(TcpConn& conn, LossEvent) {
  conn.ssthresh = std::max<std::uint64_t>(conn.cwnd / 2, 2ull * conn.mss);
  conn.cwnd = conn.ssthresh;
  conn.phase = TcpPhase::CongestionAvoidance;
  conn.bytes_acked_in_window = 0;
}

}  // namespace miraisim
