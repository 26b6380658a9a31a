#ifndef MIRAISIM_CREDENTIALS_HPP
#define MIRAISIM_CREDENTIALS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "miraisim/rng.hpp"

namespace miraisim {

struct CredentialEntry {
  std::string username;
  std::string password;
  std::uint32_t weight = 1;

  bool operator==(const CredentialEntry&) const = default;
};

// Dictionary tried during brute force, in stored order. The builtin list
// holds 62 stand-in factory-default pairs; real deployments load their own.
class Wordlist {
 public:
  Wordlist() = default;
  explicit Wordlist(std::vector<CredentialEntry> entries)
      : entries_(std::move(entries)) {}

  static const Wordlist& builtin();

  // Text format: one "user password [weight]" per line, '#' starts a
  // comment, blank lines skipped. Throws ConfigError on a malformed line.
  static Wordlist parse(std::string_view text);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const CredentialEntry& at(std::size_t i) const { return entries_.at(i); }
  const std::vector<CredentialEntry>& entries() const { return entries_; }

  // Weighted draw used when a device picks which default it ships with.
  const CredentialEntry& sample(SplitMix64& rng) const;

 private:
  std::vector<CredentialEntry> entries_;
};

}  // namespace miraisim

#endif
