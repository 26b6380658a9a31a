#ifndef MIRAISIM_SIMULATOR_HPP
#define MIRAISIM_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "miraisim/sim_time.hpp"

namespace miraisim {

// Deterministic event loop. Events fire in (fire_time, insertion sequence)
// order; ties are broken by the insertion counter so the schedule is a pure
// function of the calls made against it. Strictly single-threaded.
class Simulator {
 public:
  explicit Simulator(SimTime horizon);

  SimTime now() const { return now_; }
  SimTime horizon() const { return horizon_; }

  // Throws HorizonExceededError when t > horizon and SimError when t is in
  // the past.
  void schedule(SimTime t, std::function<void()> fn);

  // Variant for packets in flight near the end of the scenario: an event past
  // the horizon is discarded (the packet stays in flight) instead of faulting.
  // Returns whether the event was accepted.
  bool schedule_clipped(SimTime t, std::function<void()> fn);

  // Runs until the queue is empty. Returns the number of processed events.
  std::uint64_t run();

  std::uint64_t processed() const { return processed_; }

 private:
  struct EventEntry {
    SimTime fire_time;
    std::uint64_t sequence;
    std::function<void()> fn;
  };
  struct FiresLater {
    bool operator()(const EventEntry& a, const EventEntry& b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<EventEntry, std::vector<EventEntry>, FiresLater> queue_;
  SimTime now_ = 0;
  SimTime horizon_;
  std::uint64_t next_sequence_ = 0;
  std::uint64_t processed_ = 0;
};

}  // namespace miraisim

#endif
