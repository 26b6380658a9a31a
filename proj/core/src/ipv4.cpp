#include "miraisim/ipv4.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "miraisim/errors.hpp"

namespace miraisim {

std::string to_string(Ipv4Address addr) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (addr.value >> 24) & 0xFF,
                (addr.value >> 16) & 0xFF, (addr.value >> 8) & 0xFF,
                addr.value & 0xFF);
  return buf;
}

Ipv4Address parse_ipv4(std::string_view text) {
  std::uint32_t value = 0;
  int octets = 0;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  while (octets < 4) {
    unsigned octet = 0;
    auto [next, ec] = std::from_chars(p, end, octet);
    if (ec != std::errc{} || octet > 255) {
      throw ConfigError("invalid IPv4 address: " + std::string(text));
    }
    value = (value << 8) | octet;
    ++octets;
    p = next;
    if (octets < 4) {
      if (p == end || *p != '.') {
        throw ConfigError("invalid IPv4 address: " + std::string(text));
      }
      ++p;
    }
  }
  if (p != end) {
    throw ConfigError("invalid IPv4 address: " + std::string(text));
  }
  return Ipv4Address{value};
}

std::uint32_t AddressBlock::first() const {
  if (prefix_len == 0) return 0;
  const std::uint32_t mask = ~std::uint32_t{0} << (32 - prefix_len);
  return base.value & mask;
}

bool AddressBlock::contains(Ipv4Address addr) const {
  const std::uint64_t start = first();
  return addr.value >= start && addr.value < start + size();
}

AddressBlock parse_cidr(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return AddressBlock{parse_ipv4(text), 32};
  }
  const Ipv4Address base = parse_ipv4(text.substr(0, slash));
  int prefix = -1;
  const auto rest = text.substr(slash + 1);
  auto [next, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), prefix);
  if (ec != std::errc{} || next != rest.data() + rest.size() || prefix < 0 || prefix > 32) {
    throw ConfigError("invalid CIDR block: " + std::string(text));
  }
  return AddressBlock{base, prefix};
}

std::string to_string(const AddressBlock& block) {
  return to_string(Ipv4Address{block.first()}) + "/" + std::to_string(block.prefix_len);
}

std::uint64_t admissible_count(const AddressBlock& space,
                               std::span<const AddressBlock> exclusions) {
  const std::uint64_t lo = space.first();
  const std::uint64_t hi = lo + space.size();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> spans;
  for (const auto& block : exclusions) {
    const std::uint64_t b = std::max<std::uint64_t>(block.first(), lo);
    const std::uint64_t e = std::min<std::uint64_t>(block.first() + block.size(), hi);
    if (b < e) spans.emplace_back(b, e);
  }
  std::sort(spans.begin(), spans.end());
  std::uint64_t covered = 0;
  std::uint64_t cursor = lo;
  for (const auto& [b, e] : spans) {
    const std::uint64_t from = std::max(b, cursor);
    if (e > from) {
      covered += e - from;
      cursor = e;
    }
  }
  return (hi - lo) - covered;
}

Ipv4Address random_public_ipv4(SplitMix64& rng, const AddressBlock& space,
                               std::span<const AddressBlock> exclusions) {
  if (admissible_count(space, exclusions) == 0) {
    throw EmptyAddressPoolError();
  }
  const std::uint64_t base = space.first();
  const std::uint64_t size = space.size();
  for (;;) {
    const Ipv4Address addr{static_cast<std::uint32_t>(base + rng.next() % size)};
    const bool excluded = std::any_of(
        exclusions.begin(), exclusions.end(),
        [addr](const AddressBlock& block) { return block.contains(addr); });
    if (!excluded) return addr;
  }
}

}  // namespace miraisim
