#ifndef MIRAISIM_SIM_TIME_HPP
#define MIRAISIM_SIM_TIME_HPP

#include <cstdint>

namespace miraisim {

// Microseconds since scenario start.
using SimTime = std::uint64_t;

inline constexpr SimTime kMicrosPerMilli = 1'000;
inline constexpr SimTime kMicrosPerSecond = 1'000'000;

constexpr SimTime seconds(std::uint64_t s) { return s * kMicrosPerSecond; }
constexpr SimTime milliseconds(std::uint64_t ms) { return ms * kMicrosPerMilli; }

constexpr double to_seconds(SimTime t) {
  return static_cast<double>(t) / static_cast<double>(kMicrosPerSecond);
}

}  // namespace miraisim

#endif
