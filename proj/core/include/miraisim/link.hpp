#ifndef MIRAISIM_LINK_HPP
#define MIRAISIM_LINK_HPP

#include <cstdint>
#include <deque>
#include <optional>

#include "miraisim/packet.hpp"
#include "miraisim/sim_time.hpp"

namespace miraisim {

struct LinkParams {
  std::uint64_t bandwidth_bps = 100'000'000;  // 100 Mbps Ethernet
  SimTime latency = 200;                      // microseconds
  std::size_t queue_capacity = 100;           // packets
};

// One direction of an Ethernet segment. Serialization is FIFO; a packet
// occupies the queue from transmit() until its serialization completes.
class Link {
 public:
  explicit Link(LinkParams params = {});

  // Arrival time at the far end, or nullopt when the queue is full and the
  // packet is dropped. Drop is a modeled outcome, not a fault.
  std::optional<SimTime> transmit(const Packet& packet, SimTime now);

  SimTime serialization_time(std::uint32_t payload_bytes) const;
  std::size_t queue_occupancy(SimTime now);

  const LinkParams& params() const { return params_; }
  std::uint64_t transmitted() const { return transmitted_; }
  std::uint64_t delivered_scheduled() const { return transmitted_ - dropped_; }
  std::uint64_t dropped() const { return dropped_; }

 private:
  LinkParams params_;
  SimTime busy_until_ = 0;
  std::deque<SimTime> completions_;  // serialization-finish times of queued packets
  std::uint64_t transmitted_ = 0;
  std::uint64_t dropped_ = 0;
};

}  // namespace miraisim

#endif
