#ifndef MIRAISIM_NODE_HPP
#define MIRAISIM_NODE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>

#include "miraisim/credentials.hpp"
#include "miraisim/flood.hpp"
#include "miraisim/ipv4.hpp"
#include "miraisim/sim_time.hpp"

namespace miraisim {

enum class Arch : std::uint8_t { Arm, Mips, X86, Sh4, Ppc };
constexpr int kArchCount = 5;

std::string to_string(Arch arch);
Arch parse_arch(std::string_view text);

enum class NodeRole : std::uint8_t { Device, Cnc, ReportServer, Loader };

std::string to_string(NodeRole role);

struct ServiceInfo {
  std::string name;
};

namespace bot_state {
struct Dormant {};
struct Scanning {};
struct BruteForcing {
  Ipv4Address target;
  std::uint32_t attempt_index = 0;
};
struct Reporting {};
struct AwaitingLoad {};
struct Registered {};
struct Attacking {
  FloodSpec spec;
  SimTime ends_at = 0;
};
}  // namespace bot_state

using BotState =
    std::variant<bot_state::Dormant, bot_state::Scanning,
                 bot_state::BruteForcing, bot_state::Reporting,
                 bot_state::AwaitingLoad, bot_state::Registered,
                 bot_state::Attacking>;

const char* bot_state_name(const BotState& state);

struct NodeProfile {
  Ipv4Address addr;
  Arch architecture = Arch::Arm;
  std::map<std::uint16_t, ServiceInfo> services;
  std::optional<CredentialEntry> telnet_credential;
  bool infected = false;
  bool watchdog_enabled = true;
  bool competing_malware = false;
  bool self_file_deleted = false;
  std::set<std::uint16_t> reserved_ports;
  NodeRole role = NodeRole::Device;

  // A port is never both served and reserved.
  bool serves(std::uint16_t port) const {
    return services.count(port) != 0 && reserved_ports.count(port) == 0;
  }
  bool telnet_open() const { return serves(23) || serves(2323); }
};

}  // namespace miraisim

#endif
