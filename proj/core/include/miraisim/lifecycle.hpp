#ifndef MIRAISIM_LIFECYCLE_HPP
#define MIRAISIM_LIFECYCLE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "miraisim/credentials.hpp"
#include "miraisim/flood.hpp"
#include "miraisim/ipv4.hpp"
#include "miraisim/node.hpp"
#include "miraisim/packet.hpp"
#include "miraisim/rng.hpp"
#include "miraisim/sim_time.hpp"

namespace miraisim {

struct ScanConfig {
  AddressBlock address_space = {Ipv4Address{0}, 0};
  std::vector<AddressBlock> exclusions;
  std::uint32_t probes_per_tick = 1;
  // Probability a probe lands on port 23; the remainder goes to 2323.
  double port23_probability = 0.9;
};

struct ScanProbe {
  Ipv4Address target;
  std::uint16_t dst_port = 23;
};

// Emits probes_per_tick SYN targets. Address draw precedes the port draw for
// each probe, so the sequence composes directly with the RNG stream.
std::vector<ScanProbe> scan_tick(SplitMix64& rng, const ScanConfig& config);

struct BruteForceSuccess {
  CredentialEntry credential;
};
struct BruteForceContinue {};
struct BruteForceFailure {};
struct TargetUnreachable {};

using BruteForceOutcome = std::variant<BruteForceSuccess, BruteForceContinue,
                                       BruteForceFailure, TargetUnreachable>;

// One attempt at wordlist[state.attempt_index], traversed in stored order.
// Advances attempt_index on Continue. Each attempt costs one link round trip;
// the caller charges that separately.
BruteForceOutcome brute_force_step(bot_state::BruteForcing& state,
                                   const NodeProfile& target,
                                   const Wordlist& wordlist);

struct ReportRecord {
  Ipv4Address victim;
  std::uint16_t telnet_port = 23;
  CredentialEntry credential;
  SimTime reported_at = 0;
};

// Registry of compromised devices; at most one record per victim address.
class ReportServer {
 public:
  // Returns registry size after insertion; duplicates leave it unchanged.
  std::size_t submit(const ReportRecord& record);
  std::size_t size() const { return records_.size(); }
  bool contains(Ipv4Address victim) const {
    return records_.count(victim) != 0;
  }
  const ReportRecord& record_for(Ipv4Address victim) const {
    return records_.at(victim);
  }
  // True if the submission was new (a loader notification is due).
  bool last_was_new() const { return last_was_new_; }

 private:
  std::map<Ipv4Address, ReportRecord> records_;
  bool last_was_new_ = false;
};

// Wrapper used by scenario wiring; maps a missing server to NoReportServerError.
std::size_t report_compromise(ReportServer* server, const ReportRecord& record);

struct LoaderConfig {
  // Architectures the loader carries payloads for. Defaults to all five.
  std::set<Arch> payloads = {Arch::Arm, Arch::Mips, Arch::X86, Arch::Sh4,
                             Arch::Ppc};
};

enum class LoadOutcome : std::uint8_t { Infected, UnsupportedArch, AlreadyInfected };

// On Infected: marks the target infected, deletes the bot's file image,
// disables the watchdog, and leaves the target ready to scan and register.
LoadOutcome loader_dispatch(const LoaderConfig& loader, NodeProfile& target);

enum class CncAcceptOutcome : std::uint8_t { NewBotRegistered, KnownBot, Rejected };

struct AttackCommand {
  FloodSpec spec;
  SimTime issue_at = 0;
};

class CncRegistry {
 public:
  // Port 23 admits new bots; port 101 only already-registered ones.
  CncAcceptOutcome accept(Ipv4Address src, std::uint16_t dst_port);
  bool is_registered(Ipv4Address addr) const {
    return registered_.count(addr) != 0;
  }
  std::size_t size() const { return registered_.size(); }
  const std::set<Ipv4Address>& registered() const { return registered_; }

  void queue_command(const AttackCommand& command) {
    pending_commands_.push_back(command);
  }
  const std::vector<AttackCommand>& pending_commands() const {
    return pending_commands_;
  }

  // Fans the command out to every registered bot; returns the tasked count.
  std::size_t issue(const AttackCommand& command,
                    const std::function<void(Ipv4Address, const AttackCommand&)>&
                        task_bot);

 private:
  std::set<Ipv4Address> registered_;
  std::vector<AttackCommand> pending_commands_;
};

// Closes and reserves ports 22/23/80 and clears competing malware.
// Returns the ports actually closed.
std::vector<std::uint16_t> killer_apply(NodeProfile& node);

}  // namespace miraisim

#endif
