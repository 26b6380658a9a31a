#ifndef MIRAISIM_IPV4_HPP
#define MIRAISIM_IPV4_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "miraisim/rng.hpp"

namespace miraisim {

struct Ipv4Address {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(const Ipv4Address&, const Ipv4Address&) = default;
};

std::string to_string(Ipv4Address addr);
Ipv4Address parse_ipv4(std::string_view text);

// A CIDR block; prefix_len 0..32.
struct AddressBlock {
  Ipv4Address base;
  int prefix_len = 32;

  std::uint64_t size() const { return std::uint64_t{1} << (32 - prefix_len); }
  std::uint32_t first() const;
  bool contains(Ipv4Address addr) const;
  friend constexpr auto operator<=>(const AddressBlock&, const AddressBlock&) = default;
};

AddressBlock parse_cidr(std::string_view text);
std::string to_string(const AddressBlock& block);

// Number of addresses of `space` not covered by any exclusion block.
std::uint64_t admissible_count(const AddressBlock& space,
                               std::span<const AddressBlock> exclusions);

// Uniform draw over `space` minus `exclusions`: base + (draw mod size),
// redrawn while the result lands in an excluded block. Throws
// EmptyAddressPoolError when nothing is admissible.
Ipv4Address random_public_ipv4(SplitMix64& rng, const AddressBlock& space,
                               std::span<const AddressBlock> exclusions);

}  // namespace miraisim

#endif
