#include "miraisim/credentials.hpp"

#include <set>
#include <sstream>
#include <utility>

#include "miraisim/errors.hpp"

namespace miraisim {

namespace {

// Placeholder factory-default pairs, 62 entries, uniform weight. Entries are
// unique by (username, password).
const char* const kBuiltinPairs[][2] = {
    {"root", "root"},           {"root", "admin"},
    {"root", "password"},       {"root", "123456"},
    {"root", "12345"},          {"root", "1234"},
    {"root", "54321"},          {"root", "1111"},
    {"root", "666666"},         {"root", "888888"},
    {"root", "default"},        {"root", "system"},
    {"root", "user"},           {"root", "pass"},
    {"root", "00000000"},       {"root", "0000"},
    {"root", "camera"},         {"root", "dvr"},
    {"root", "nvr"},            {"root", "router"},
    {"root", "gateway"},        {"root", "vendor1"},
    {"root", "vendor2"},        {"root", "vendor3"},
    {"root", "changeme"},       {"root", "letmein"},
    {"root", "qwerty"},         {"root", "abc123"},
    {"root", "firmware"},       {"root", "factory"},
    {"admin", "admin"},         {"admin", "password"},
    {"admin", "1234"},          {"admin", "12345"},
    {"admin", "123456"},        {"admin", "54321"},
    {"admin", "1111"},          {"admin", "1111111"},
    {"admin", "admin1234"},     {"admin", "adminadmin"},
    {"admin", "pass"},          {"admin", "default"},
    {"admin", "changeme"},      {"admin", "camera"},
    {"administrator", "admin"}, {"administrator", "1234"},
    {"admin1", "password"},     {"user", "user"},
    {"user", "password"},       {"guest", "guest"},
    {"guest", "12345"},         {"support", "support"},
    {"service", "service"},     {"supervisor", "supervisor"},
    {"tech", "tech"},           {"operator", "operator"},
    {"telnet", "telnet"},       {"default", "default"},
    {"666666", "666666"},       {"888888", "888888"},
    {"ubnt", "ubnt"},           {"daemon", "daemon"},
};

Wordlist make_builtin() {
  std::vector<CredentialEntry> entries;
  entries.reserve(std::size(kBuiltinPairs));
  for (const auto& pair : kBuiltinPairs)
    entries.push_back({pair[0], pair[1], 1});
  return Wordlist(std::move(entries));
}

}  // namespace

const Wordlist& Wordlist::builtin() {
  static const Wordlist list = make_builtin();
  return list;
}

Wordlist Wordlist::parse(std::string_view text) {
  std::vector<CredentialEntry> entries;
  std::set<std::pair<std::string, std::string>> seen;
  std::istringstream stream{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    CredentialEntry entry;
    if (!(fields >> entry.username))
      continue;  // blank or comment-only line
    if (!(fields >> entry.password))
      throw ConfigError("wordlist line " + std::to_string(line_no) +
                        ": missing password");
    entry.weight = 1;
    if (std::string weight_field; fields >> weight_field) {
      try {
        std::size_t used = 0;
        const unsigned long parsed = std::stoul(weight_field, &used);
        if (used != weight_field.size())
          throw std::invalid_argument(weight_field);
        entry.weight = static_cast<std::uint32_t>(parsed);
      } catch (const std::exception&) {
        throw ConfigError("wordlist line " + std::to_string(line_no) +
                          ": bad weight '" + weight_field + "'");
      }
      if (std::string extra; fields >> extra)
        throw ConfigError("wordlist line " + std::to_string(line_no) +
                          ": trailing field '" + extra + "'");
    }
    if (!seen.emplace(entry.username, entry.password).second)
      throw ConfigError("wordlist line " + std::to_string(line_no) +
                        ": duplicate pair " + entry.username + "/" +
                        entry.password);
    entries.push_back(std::move(entry));
  }
  return Wordlist(std::move(entries));
}

const CredentialEntry& Wordlist::sample(SplitMix64& rng) const {
  if (entries_.empty())
    throw SimError("cannot sample an empty wordlist");
  std::uint64_t total = 0;
  for (const auto& entry : entries_) total += entry.weight;
  if (total == 0)
    throw SimError("wordlist weights sum to zero");
  std::uint64_t pick = rng.next() % total;
  for (const auto& entry : entries_) {
    if (pick < entry.weight) return entry;
    pick -= entry.weight;
  }
  return entries_.back();
}

}  // namespace miraisim
