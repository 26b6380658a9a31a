#include "miraisim/lifecycle.hpp"

#include <algorithm>

#include "miraisim/errors.hpp"

namespace miraisim {

std::string to_string(Arch arch) {
  switch (arch) {
    case Arch::Arm: return "arm";
    case Arch::Mips: return "mips";
    case Arch::X86: return "x86";
    case Arch::Sh4: return "sh4";
    case Arch::Ppc: return "ppc";
  }
  return "?";
}

Arch parse_arch(std::string_view text) {
  if (text == "arm") return Arch::Arm;
  if (text == "mips") return Arch::Mips;
  if (text == "x86") return Arch::X86;
  if (text == "sh4") return Arch::Sh4;
  if (text == "ppc") return Arch::Ppc;
  throw ConfigError("unknown architecture '" + std::string(text) + "'");
}

std::string to_string(NodeRole role) {
  switch (role) {
    case NodeRole::Device: return "device";
    case NodeRole::Cnc: return "cnc";
    case NodeRole::ReportServer: return "report-server";
    case NodeRole::Loader: return "loader";
  }
  return "?";
}

const char* bot_state_name(const BotState& state) {
  struct Namer {
    const char* operator()(const bot_state::Dormant&) { return "dormant"; }
    const char* operator()(const bot_state::Scanning&) { return "scanning"; }
    const char* operator()(const bot_state::BruteForcing&) {
      return "brute-forcing";
    }
    const char* operator()(const bot_state::Reporting&) { return "reporting"; }
    const char* operator()(const bot_state::AwaitingLoad&) {
      return "awaiting-load";
    }
    const char* operator()(const bot_state::Registered&) { return "registered"; }
    const char* operator()(const bot_state::Attacking&) { return "attacking"; }
  };
  return std::visit(Namer{}, state);
}

std::vector<ScanProbe> scan_tick(SplitMix64& rng, const ScanConfig& config) {
  if (config.probes_per_tick < 1)
    throw SimError("scan_tick: probes_per_tick must be at least 1");
  std::vector<ScanProbe> probes;
  probes.reserve(config.probes_per_tick);
  for (std::uint32_t i = 0; i < config.probes_per_tick; ++i) {
    ScanProbe probe;
    probe.target =
        random_public_ipv4(rng, config.address_space, config.exclusions);
    probe.dst_port =
        rng.chance(config.port23_probability) ? std::uint16_t{23}
                                              : std::uint16_t{2323};
    probes.push_back(probe);
  }
  return probes;
}

BruteForceOutcome brute_force_step(bot_state::BruteForcing& state,
                                   const NodeProfile& target,
                                   const Wordlist& wordlist) {
  if (!target.telnet_open())
    return TargetUnreachable{};
  if (state.attempt_index >= wordlist.size())
    return BruteForceFailure{};
  const CredentialEntry& attempt = wordlist.at(state.attempt_index);
  if (target.telnet_credential &&
      target.telnet_credential->username == attempt.username &&
      target.telnet_credential->password == attempt.password) {
    return BruteForceSuccess{attempt};
  }
  ++state.attempt_index;
  if (state.attempt_index >= wordlist.size())
    return BruteForceFailure{};
  return BruteForceContinue{};
}

std::size_t ReportServer::submit(const ReportRecord& record) {
  auto [it, inserted] = records_.emplace(record.victim, record);
  last_was_new_ = inserted;
  return records_.size();
}

std::size_t report_compromise(ReportServer* server, const ReportRecord& record) {
  if (server == nullptr)
    throw NoReportServerError();
  return server->submit(record);
}

LoadOutcome loader_dispatch(const LoaderConfig& loader, NodeProfile& target) {
  if (target.infected)
    return LoadOutcome::AlreadyInfected;
  if (loader.payloads.count(target.architecture) == 0)
    return LoadOutcome::UnsupportedArch;
  target.infected = true;
  target.self_file_deleted = true;
  target.watchdog_enabled = false;
  return LoadOutcome::Infected;
}

CncAcceptOutcome CncRegistry::accept(Ipv4Address src, std::uint16_t dst_port) {
  if (dst_port == 23) {
    if (registered_.insert(src).second)
      return CncAcceptOutcome::NewBotRegistered;
    return CncAcceptOutcome::KnownBot;
  }
  if (dst_port == 101)
    return is_registered(src) ? CncAcceptOutcome::KnownBot
                              : CncAcceptOutcome::Rejected;
  return CncAcceptOutcome::Rejected;
}

std::size_t CncRegistry::issue(
    const AttackCommand& command,
    const std::function<void(Ipv4Address, const AttackCommand&)>& task_bot) {
  if (command.spec.duration == 0)
    throw InvalidSpecError("attack command: duration must be positive");
  for (Ipv4Address addr : registered_)
    task_bot(addr, command);
  return registered_.size();
}

std::vector<std::uint16_t> killer_apply(NodeProfile& node) {
  std::vector<std::uint16_t> closed;
  for (std::uint16_t port : {std::uint16_t{22}, std::uint16_t{23},
                             std::uint16_t{80}}) {
    if (node.services.erase(port) != 0)
      closed.push_back(port);
    node.reserved_ports.insert(port);
  }
  node.competing_malware = false;
  return closed;
}

}  // namespace miraisim
