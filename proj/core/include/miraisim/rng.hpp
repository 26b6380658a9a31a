#ifndef MIRAISIM_RNG_HPP
#define MIRAISIM_RNG_HPP

#include <cstdint>

namespace miraisim {

// SplitMix64. One 64-bit word of state; every draw is a pure function of
// the state, so identical seeds give identical streams on every platform.
class SplitMix64 {
 public:
  SplitMix64() = default;
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) built from the top 53 bits.
  constexpr double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  constexpr bool chance(double p) { return next_unit() < p; }

  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_ = 0;
};

}  // namespace miraisim

#endif
