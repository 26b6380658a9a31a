#include "miraisim/link.hpp"

#include <algorithm>

#include "miraisim/errors.hpp"

namespace miraisim {

Link::Link(LinkParams params) : params_(params) {
  if (params_.bandwidth_bps == 0) {
    throw SimError("link bandwidth must be positive");
  }
}

SimTime Link::serialization_time(std::uint32_t payload_bytes) const {
  const std::uint64_t bits = std::uint64_t{payload_bytes} * 8;
  // ceil(bits / bandwidth) in microseconds
  return (bits * kMicrosPerSecond + params_.bandwidth_bps - 1) / params_.bandwidth_bps;
}

std::size_t Link::queue_occupancy(SimTime now) {
  while (!completions_.empty() && completions_.front() <= now) {
    completions_.pop_front();
  }
  return completions_.size();
}

std::optional<SimTime> Link::transmit(const Packet& packet, SimTime now) {
  ++transmitted_;
  if (queue_occupancy(now) >= params_.queue_capacity) {
    ++dropped_;
    return std::nullopt;
  }
  const SimTime start = std::max(now, busy_until_);
  const SimTime finish = start + serialization_time(packet.payload_bytes);
  busy_until_ = finish;
  completions_.push_back(finish);
  return finish + params_.latency;
}

}  // namespace miraisim
