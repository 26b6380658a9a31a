#ifndef MIRAISIM_FLOOD_HPP
#define MIRAISIM_FLOOD_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>

#include "miraisim/ipv4.hpp"
#include "miraisim/packet.hpp"
#include "miraisim/sim_time.hpp"

namespace miraisim {

struct FloodSpec {
  Protocol protocol = Protocol::Udp;
  Ipv4Address target;
  std::uint16_t target_port = 5201;
  std::uint64_t per_stream_rate_bps = 30'000'000;
  std::uint32_t payload_bytes = 1200;
  std::uint32_t parallel_streams = 6;
  SimTime duration = seconds(60);

  friend constexpr auto operator<=>(const FloodSpec&, const FloodSpec&) = default;
};

// Throws InvalidSpecError on a violated invariant.
void validate(const FloodSpec& spec);

// "paper-udp" / "paper-tcp": 30 Mbps per stream, 1200-byte payload,
// 6 parallel streams, 60 seconds.
std::optional<FloodSpec> flood_preset(std::string_view name, Ipv4Address target,
                                      std::uint16_t target_port = 5201);

// Deterministic emission grid for a constant-rate UDP stream.
struct UdpSchedule {
  std::uint64_t payload_bytes = 1200;
  std::uint64_t rate_bps = 30'000'000;

  // Offset of the k-th emission from stream start.
  SimTime emit_offset(std::uint64_t k) const {
    return k * payload_bytes * 8 * kMicrosPerSecond / rate_bps;
  }
  // Number of packets offered before `duration` elapses.
  std::uint64_t packets_within(SimTime duration) const;
};

enum class TcpPhase : std::uint8_t { SlowStart, CongestionAvoidance };

struct TcpConn {
  std::uint64_t cwnd = 0;      // bytes
  std::uint64_t ssthresh = 0;  // bytes
  std::uint32_t mss = 1200;    // bytes
  SimTime srtt = 0;            // microseconds, fixed per connection
  std::uint64_t in_flight = 0; // bytes
  TcpPhase phase = TcpPhase::SlowStart;
  std::uint64_t bytes_acked_in_window = 0;  // congestion-avoidance accumulator
};

TcpConn make_tcp_conn(std::uint32_t mss, SimTime srtt);

struct AckEvent {
  std::uint32_t bytes = 0;
};
struct LossEvent {};

// Reno-style AIMD. Slow start grows cwnd by one mss per full-segment ack and
// hands over to congestion avoidance at ssthresh; congestion avoidance grows
// cwnd by one mss per cwnd of acked bytes; a loss halves cwnd into ssthresh
// (floor 2*mss) and stays in congestion avoidance. No fast retransmit.
void tcp_cwnd_update(TcpConn& conn, AckEvent ack);
void tcp_cwnd_update(TcpConn& conn, LossEvent loss);

}  // namespace miraisim

#endif
