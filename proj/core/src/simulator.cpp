#include "miraisim/simulator.hpp"

#include <utility>

#include "miraisim/errors.hpp"

namespace miraisim {

Simulator::Simulator(SimTime horizon) : horizon_(horizon) {}

void Simulator::schedule(SimTime t, std::function<void()> fn) {
  if (t > horizon_) {
    throw HorizonExceededError("event at " + std::to_string(t) +
                               "us is beyond the horizon " +
                               std::to_string(horizon_) + "us");
  }
  if (t < now_) {
    throw SimError("event scheduled in the past");
  }
  queue_.push(EventEntry{t, next_sequence_++, std::move(fn)});
}

bool Simulator::schedule_clipped(SimTime t, std::function<void()> fn) {
  if (t > horizon_) return false;
  schedule(t, std::move(fn));
  return true;
}

std::uint64_t Simulator::run() {
  while (!queue_.empty()) {
    // priority_queue::top is const; the entry is copied cheaply enough for
    // the handler sizes used here, but moving keeps std::function allocations
    // to one per event.
    EventEntry entry = std::move(const_cast<EventEntry&>(queue_.top()));
    queue_.pop();
    now_ = entry.fire_time;
    ++processed_;
    entry.fn();
  }
  return processed_;
}

}  // namespace miraisim
