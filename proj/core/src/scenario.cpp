#include "miraisim/scenario.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "miraisim/errors.hpp"
#include "miraisim/lifecycle.hpp"
#include "miraisim/link.hpp"
#include "miraisim/rng.hpp"
#include "miraisim/simulator.hpp"

namespace miraisim {

namespace {

constexpr std::uint16_t kTelnetPort = 23;
constexpr std::uint16_t kReportPort = 48101;
constexpr std::uint16_t kLoaderPort = 48102;
constexpr std::uint32_t kReportPayload = 64;
constexpr std::uint32_t kCredPayload = 32;
constexpr std::uint32_t kPromptPayload = 16;
constexpr std::uint32_t kRegisterPayload = 16;
constexpr std::uint32_t kLoaderPayloadBytes = 64'000;
constexpr SimTime kBruteTimeout = milliseconds(100);

// Telnet prompt reply codes carried in Packet::seq.
constexpr std::uint64_t kPromptContinue = 0;
constexpr std::uint64_t kPromptSuccess = 1;
constexpr std::uint64_t kPromptFailure = 2;

struct DeviceRuntime {
  NodeProfile profile;
  BotState state = bot_state::Dormant{};
  bool registered = false;
  bool scan_timer_running = false;
  std::uint16_t next_ephemeral = 49152;
  std::uint32_t tcp_gauge = 0;
  // Brute-force session bookkeeping.
  std::uint64_t brute_session = 0;
  Ipv4Address brute_target;
  std::uint16_t brute_port = kTelnetPort;
  std::uint16_t brute_sport = 0;
  NodeTelemetry telemetry;
  // Ledgers mirrored into NodeResult after the run.
  std::uint64_t app_tx = 0, wire_tx = 0, wire_tx_bytes = 0;
  std::uint64_t rx = 0, rx_bytes = 0;
  std::array<std::uint64_t, kPacketKindCount> rx_by_kind{};
  std::array<std::uint64_t, kPacketKindCount> tx_by_kind{};
  std::string name;
};

struct TcpStream {
  std::size_t bot = 0;
  FloodSpec spec;
  TcpConn conn;
  std::uint16_t src_port = 0;
  SimTime started = 0;
  SimTime flood_end = 0;
  std::uint64_t bytes_offered = 0;
  std::uint64_t next_seq = 0;
  std::size_t offered_ledger = 0;  // index into flood_offered_per_stream
  bool handshake_done = false;
  bool open = false;
  bool pump_scheduled = false;
};

class Engine {
 public:
  Engine(const ScenarioConfig& config, const ResourceModelParams& params)
      : config_(config), params_(params), rng_(config.seed),
        sim_(config.horizon) {
    build_topology();
  }

  ScenarioResult run();

 private:
  void build_topology();
  std::size_t index_of(Ipv4Address addr) const;
  bool known(Ipv4Address addr) const { return by_addr_.count(addr.value) != 0; }
  DeviceRuntime& at(Ipv4Address addr) { return nodes_[index_of(addr)]; }

  Link& link_between(Ipv4Address src, Ipv4Address dst);
  void send(std::size_t src_idx, Packet packet);
  void deliver(const Packet& packet);
  void capture(std::size_t node_idx, const Packet& packet);

  void bootstrap_bot(std::size_t idx, bool pre_registered);
  void schedule_scan(std::size_t idx);
  void scan_fire(std::size_t idx);
  void begin_brute(std::size_t bot_idx, Ipv4Address target,
                   std::uint16_t port);
  void send_attempt(std::size_t bot_idx);
  void end_brute(std::size_t bot_idx);
  void on_telnet_cred(const Packet& packet);
  void on_telnet_prompt(const Packet& packet);
  void on_report(const Packet& packet);
  void on_loader_request(const Packet& packet);
  void on_loader_payload(const Packet& packet);
  void on_cnc_packet(const Packet& packet);

  void schedule_commands();
  FloodSpec command_spec(const std::string& preset) const;
  void issue_command(const AttackCommand& command);
  void start_flood(std::size_t bot_idx, const FloodSpec& spec, SimTime now);
  void stop_flood(std::size_t bot_idx, const FloodSpec& spec);
  void udp_emit(std::size_t bot_idx, const FloodSpec& spec, SimTime t0,
                std::uint16_t sport, std::size_t ledger, std::uint64_t k);
  void pump(std::size_t stream_idx);
  void on_flood_syn(const Packet& packet);
  void on_flood_synack(const Packet& packet);
  void on_flood_data(const Packet& packet);
  void on_flood_ack(const Packet& packet);

  void schedule_sampler(std::uint64_t tick);
  void record_infection(std::size_t idx);

  SimTime data_srtt(const FloodSpec& spec) const;
  std::uint16_t alloc_port(std::size_t idx) {
    return nodes_[idx].next_ephemeral++;
  }

  const ScenarioConfig& config_;
  const ResourceModelParams& params_;
  SplitMix64 rng_;
  Simulator sim_;

  std::vector<DeviceRuntime> nodes_;
  std::map<std::uint32_t, std::size_t> by_addr_;
  std::size_t device_count_ = 0;
  Ipv4Address cnc_addr_, report_addr_, loader_addr_;
  Ipv4Address victim_addr_;
  std::set<std::uint32_t> captured_;
  std::map<std::uint64_t, Link> links_;  // keyed (src << 32) | dst

  Wordlist wordlist_ = Wordlist::builtin();
  ScanConfig scan_config_;
  ReportServer report_server_;
  CncRegistry cnc_registry_;
  LoaderConfig loader_config_;

  std::vector<TcpStream> tcp_streams_;
  std::map<std::uint64_t, std::size_t> stream_by_port_;  // (node << 16) | port

  std::vector<TraceRecord> trace_;
  std::vector<std::uint64_t> flood_offered_;
  std::vector<std::pair<SimTime, std::uint32_t>> infections_;
  std::uint32_t infected_count_ = 0;
  std::uint64_t delivered_total_ = 0;
};

void Engine::build_topology() {
  const Ipv4Address base{config_.address_space.first()};
  cnc_addr_ = config_.infrastructure.cnc.value_or(Ipv4Address{base.value + 2});
  report_addr_ =
      config_.infrastructure.report.value_or(Ipv4Address{base.value + 3});
  loader_addr_ =
      config_.infrastructure.loader.value_or(Ipv4Address{base.value + 4});

  device_count_ = config_.population.count;
  if (device_count_ == 0) return;  // empty scenario: no nodes, no events
  nodes_.reserve(device_count_ + 3);

  SplitMix64 assign_rng(config_.seed ^ 0x5EEDF00DULL);
  double mix_total = 0;
  for (const auto& [arch, w] : config_.population.arch_mix) mix_total += w;

  for (std::uint32_t i = 0; i < device_count_; ++i) {
    DeviceRuntime d;
    d.profile.addr = Ipv4Address{base.value + 10 + i};
    d.profile.role = NodeRole::Device;
    d.name = i == 0 ? "attacker" : i == 1 ? "victim" : "device" + std::to_string(i);

    double pick = assign_rng.next_unit() * mix_total;
    d.profile.architecture = config_.population.arch_mix.begin()->first;
    for (const auto& [arch, w] : config_.population.arch_mix) {
      d.profile.architecture = arch;
      if (pick < w) break;
      pick -= w;
    }

    if (config_.population.credential_rule == "wordlist") {
      d.profile.services[kTelnetPort] = {"telnet"};
      const bool vulnerable =
          assign_rng.next_unit() < config_.population.vulnerable_fraction;
      if (vulnerable)
        d.profile.telnet_credential = wordlist_.sample(assign_rng);
      else
        d.profile.telnet_credential =
            CredentialEntry{"local", "unit-" + std::to_string(i), 1};
    }
    d.telemetry = NodeTelemetry(config_.telemetry.cadence, &params_);
    nodes_.push_back(std::move(d));
  }

  auto add_infra = [&](Ipv4Address addr, NodeRole role, const char* name) {
    DeviceRuntime d;
    d.profile.addr = addr;
    d.profile.role = role;
    d.name = name;
    if (role == NodeRole::Cnc) d.profile.services[kTelnetPort] = {"cnc"};
    d.telemetry = NodeTelemetry(config_.telemetry.cadence, &params_);
    nodes_.push_back(std::move(d));
  };
  add_infra(cnc_addr_, NodeRole::Cnc, "cnc");
  add_infra(report_addr_, NodeRole::ReportServer, "report");
  add_infra(loader_addr_, NodeRole::Loader, "loader");

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const std::uint32_t addr = nodes_[i].profile.addr.value;
    if (!by_addr_.emplace(addr, i).second)
      throw ConfigError("address collision at " +
                        to_string(nodes_[i].profile.addr));
  }

  victim_addr_ = nodes_[device_count_ > 1 ? 1 : 0].profile.addr;

  if (config_.telemetry.capture == "victim") {
    captured_.insert(victim_addr_.value);
  } else if (config_.telemetry.capture == "all") {
    for (const auto& n : nodes_) captured_.insert(n.profile.addr.value);
  }

  scan_config_.address_space = config_.address_space;
  scan_config_.exclusions = {{cnc_addr_, 32}, {report_addr_, 32},
                             {loader_addr_, 32}};
  scan_config_.probes_per_tick = std::max(1u, config_.population.scan_probes_per_tick);

  infections_.push_back({0, 0});
  for (std::uint32_t i = 0; i < config_.population.initial_bots; ++i)
    bootstrap_bot(i, config_.population.pre_registered);
}

std::size_t Engine::index_of(Ipv4Address addr) const {
  auto it = by_addr_.find(addr.value);
  if (it == by_addr_.end())
    throw SimError("no node at " + to_string(addr));
  return it->second;
}

Link& Engine::link_between(Ipv4Address src, Ipv4Address dst) {
  const std::uint64_t key =
      (static_cast<std::uint64_t>(src.value) << 32) | dst.value;
  auto it = links_.find(key);
  if (it == links_.end())
    it = links_.emplace(key, Link(config_.link)).first;
  return it->second;
}

void Engine::capture(std::size_t node_idx, const Packet& packet) {
  if (captured_.count(nodes_[node_idx].profile.addr.value) == 0) return;
  trace_.push_back({sim_.now(), packet});
  nodes_[node_idx].telemetry.note_log(kPcapRecordHeaderBytes +
                                      captured_length(packet));
}

void Engine::send(std::size_t src_idx, Packet packet) {
  DeviceRuntime& src = nodes_[src_idx];
  packet.src = src.profile.addr;
  ++src.app_tx;
  src.telemetry.note_app_tx();

  const bool stream_data =
      packet.kind == PacketKind::Data &&
      stream_by_port_.count((static_cast<std::uint64_t>(src_idx) << 16) |
                            packet.src_port) != 0;

  if (!known(packet.dst)) {
    // The probe leaves the interface and dies in the address space.
    ++src.wire_tx;
    src.wire_tx_bytes += wire_bytes(packet);
    ++src.tx_by_kind[static_cast<int>(packet.kind)];
    src.telemetry.note_wire_tx(packet);
    capture(src_idx, packet);
    return;
  }

  Link& link = link_between(packet.src, packet.dst);
  const auto arrival = link.transmit(packet, sim_.now());
  if (!arrival) {
    if (stream_data) {
      // Sender learns of the egress drop one round trip later.
      const std::uint64_t key =
          (static_cast<std::uint64_t>(src_idx) << 16) | packet.src_port;
      const std::size_t stream_idx = stream_by_port_.at(key);
      const SimTime srtt = tcp_streams_[stream_idx].conn.srtt;
      sim_.schedule_clipped(sim_.now() + srtt, [this, stream_idx] {
        TcpStream& s = tcp_streams_[stream_idx];
        if (!s.open) return;
        s.conn.in_flight =
            s.conn.in_flight >= s.conn.mss ? s.conn.in_flight - s.conn.mss : 0;
        tcp_cwnd_update(s.conn, LossEvent{});
        pump(stream_idx);
      });
    }
    return;
  }

  ++src.wire_tx;
  src.wire_tx_bytes += wire_bytes(packet);
  ++src.tx_by_kind[static_cast<int>(packet.kind)];
  src.telemetry.note_wire_tx(packet);
  capture(src_idx, packet);
  sim_.schedule_clipped(*arrival, [this, packet] { deliver(packet); });
}

void Engine::deliver(const Packet& packet) {
  const std::size_t dst_idx = index_of(packet.dst);
  DeviceRuntime& dst = nodes_[dst_idx];
  ++delivered_total_;
  ++dst.rx;
  dst.rx_bytes += wire_bytes(packet);
  ++dst.rx_by_kind[static_cast<int>(packet.kind)];
  dst.telemetry.note_rx(packet);
  capture(dst_idx, packet);

  switch (packet.kind) {
    case PacketKind::Syn:
      if (packet.dst_port == kTelnetPort || packet.dst_port == 2323) {
        if (dst.profile.serves(packet.dst_port)) {
          Packet reply{dst.profile.addr, packet.src, packet.dst_port,
                       packet.src_port, Protocol::Tcp, PacketKind::SynAck,
                       0, 0};
          send(dst_idx, reply);
        }
      } else {
        on_flood_syn(packet);
      }
      break;
    case PacketKind::SynAck:
      if (packet.src_port == kTelnetPort || packet.src_port == 2323) {
        if (std::holds_alternative<bot_state::Scanning>(dst.state) ||
            std::holds_alternative<bot_state::Registered>(dst.state))
          begin_brute(dst_idx, packet.src, packet.src_port);
      } else {
        on_flood_synack(packet);
      }
      break;
    case PacketKind::Ack:
      on_flood_ack(packet);
      break;
    case PacketKind::TelnetCred:
      on_telnet_cred(packet);
      break;
    case PacketKind::TelnetPrompt:
      on_telnet_prompt(packet);
      break;
    case PacketKind::Data:
      if (packet.dst_port == kReportPort && dst.profile.role == NodeRole::ReportServer)
        on_report(packet);
      else if (packet.dst_port == kLoaderPort && dst.profile.role == NodeRole::Loader)
        on_loader_request(packet);
      else
        on_flood_data(packet);
      break;
    case PacketKind::LoaderPayload:
      on_loader_payload(packet);
      break;
    case PacketKind::CncRegister:
      on_cnc_packet(packet);
      break;
    case PacketKind::CncCommand:
      break;
  }
}

void Engine::bootstrap_bot(std::size_t idx, bool pre_registered) {
  DeviceRuntime& d = nodes_[idx];
  d.profile.infected = true;
  d.profile.self_file_deleted = true;
  d.profile.watchdog_enabled = false;
  killer_apply(d.profile);
  d.state = bot_state::Scanning{};
  record_infection(idx);
  if (pre_registered) {
    cnc_registry_.accept(d.profile.addr, kTelnetPort);
    d.registered = true;
    d.state = bot_state::Registered{};
  }
  schedule_scan(idx);
}

void Engine::record_infection(std::size_t) {
  ++infected_count_;
  infections_.push_back({sim_.now(), infected_count_});
}

void Engine::schedule_scan(std::size_t idx) {
  if (config_.population.scan_probes_per_tick == 0) return;
  if (nodes_[idx].scan_timer_running) return;
  nodes_[idx].scan_timer_running = true;
  const SimTime next = sim_.now() + config_.population.scan_tick;
  if (!sim_.schedule_clipped(next, [this, idx] {
        nodes_[idx].scan_timer_running = false;
        scan_fire(idx);
      }))
    nodes_[idx].scan_timer_running = false;
}

void Engine::scan_fire(std::size_t idx) {
  DeviceRuntime& d = nodes_[idx];
  if (std::holds_alternative<bot_state::Scanning>(d.state) ||
      std::holds_alternative<bot_state::Registered>(d.state)) {
    const auto probes = scan_tick(rng_, scan_config_);
    for (const ScanProbe& probe : probes) {
      if (probe.target == d.profile.addr) continue;
      Packet syn{d.profile.addr, probe.target, 40000, probe.dst_port,
                 Protocol::Tcp, PacketKind::Syn, 0, 0};
      send(idx, syn);
    }
  }
  schedule_scan(idx);
}

void Engine::begin_brute(std::size_t bot_idx, Ipv4Address target,
                         std::uint16_t port) {
  DeviceRuntime& bot = nodes_[bot_idx];
  bot.state = bot_state::BruteForcing{target, 0};
  ++bot.brute_session;
  bot.brute_target = target;
  bot.brute_port = port;
  bot.brute_sport = alloc_port(bot_idx);
  send_attempt(bot_idx);
}

void Engine::send_attempt(std::size_t bot_idx) {
  DeviceRuntime& bot = nodes_[bot_idx];
  const auto* bf = std::get_if<bot_state::BruteForcing>(&bot.state);
  if (bf == nullptr) return;
  Packet cred{bot.profile.addr, bot.brute_target, bot.brute_sport,
              bot.brute_port, Protocol::Tcp, PacketKind::TelnetCred,
              kCredPayload, bf->attempt_index};
  send(bot_idx, cred);

  const std::uint64_t session = bot.brute_session;
  const std::uint32_t attempt = bf->attempt_index;
  sim_.schedule_clipped(sim_.now() + kBruteTimeout,
                        [this, bot_idx, session, attempt] {
    DeviceRuntime& b = nodes_[bot_idx];
    const auto* state = std::get_if<bot_state::BruteForcing>(&b.state);
    if (state == nullptr || b.brute_session != session) return;
    if (state->attempt_index != attempt) return;  // a reply advanced it
    end_brute(bot_idx);
  });
}

void Engine::end_brute(std::size_t bot_idx) {
  DeviceRuntime& bot = nodes_[bot_idx];
  ++bot.brute_session;
  bot.state = bot.registered ? BotState{bot_state::Registered{}}
                             : BotState{bot_state::Scanning{}};
}

void Engine::on_telnet_cred(const Packet& packet) {
  if (!known(packet.src)) return;
  const std::size_t bot_idx = index_of(packet.src);
  DeviceRuntime& bot = nodes_[bot_idx];
  DeviceRuntime& target = at(packet.dst);
  auto* bf = std::get_if<bot_state::BruteForcing>(&bot.state);
  if (bf == nullptr || bf->target != packet.dst) return;

  const BruteForceOutcome outcome =
      brute_force_step(*bf, target.profile, wordlist_);
  std::uint64_t code;
  if (std::holds_alternative<BruteForceSuccess>(outcome))
    code = kPromptSuccess;
  else if (std::holds_alternative<BruteForceContinue>(outcome))
    code = kPromptContinue;
  else if (std::holds_alternative<BruteForceFailure>(outcome))
    code = kPromptFailure;
  else
    return;  // unreachable targets answer with silence

  const std::size_t target_idx = index_of(packet.dst);
  Packet prompt{target.profile.addr, packet.src, packet.dst_port,
                packet.src_port, Protocol::Tcp, PacketKind::TelnetPrompt,
                kPromptPayload, code};
  send(target_idx, prompt);
}

void Engine::on_telnet_prompt(const Packet& packet) {
  const std::size_t bot_idx = index_of(packet.dst);
  DeviceRuntime& bot = nodes_[bot_idx];
  const auto* bf = std::get_if<bot_state::BruteForcing>(&bot.state);
  if (bf == nullptr || bf->target != packet.src) return;

  if (packet.seq == kPromptContinue) {
    send_attempt(bot_idx);
    return;
  }
  if (packet.seq == kPromptSuccess) {
    bot.state = bot_state::Reporting{};
    ++bot.brute_session;
    Packet report{bot.profile.addr, report_addr_, alloc_port(bot_idx),
                  kReportPort, Protocol::Tcp, PacketKind::Data,
                  kReportPayload, packet.src.value};
    send(bot_idx, report);
    bot.state = bot.registered ? BotState{bot_state::Registered{}}
                               : BotState{bot_state::Scanning{}};
    return;
  }
  end_brute(bot_idx);  // kPromptFailure: dictionary exhausted
}

void Engine::on_report(const Packet& packet) {
  const Ipv4Address victim{static_cast<std::uint32_t>(packet.seq)};
  if (!known(victim)) return;
  DeviceRuntime& victim_node = at(victim);
  if (!victim_node.profile.telnet_credential) return;
  ReportRecord record{victim, kTelnetPort,
                      *victim_node.profile.telnet_credential, sim_.now()};
  report_server_.submit(record);
  if (!report_server_.last_was_new()) return;
  const std::size_t report_idx = index_of(report_addr_);
  Packet notify{report_addr_, loader_addr_, alloc_port(report_idx),
                kLoaderPort, Protocol::Tcp, PacketKind::Data, kReportPayload,
                victim.value};
  send(report_idx, notify);
}

void Engine::on_loader_request(const Packet& packet) {
  const Ipv4Address victim{static_cast<std::uint32_t>(packet.seq)};
  if (!known(victim)) return;
  DeviceRuntime& target = at(victim);
  if (target.profile.infected) return;
  if (loader_config_.payloads.count(target.profile.architecture) == 0) return;
  const std::size_t loader_idx = index_of(loader_addr_);
  Packet payload{loader_addr_, victim, alloc_port(loader_idx), kTelnetPort,
                 Protocol::Tcp, PacketKind::LoaderPayload, kLoaderPayloadBytes,
                 victim.value};
  send(loader_idx, payload);
}

void Engine::on_loader_payload(const Packet& packet) {
  const std::size_t idx = index_of(packet.dst);
  DeviceRuntime& d = nodes_[idx];
  if (loader_dispatch(loader_config_, d.profile) != LoadOutcome::Infected)
    return;
  killer_apply(d.profile);
  d.state = bot_state::Scanning{};
  record_infection(idx);
  schedule_scan(idx);
  Packet reg{d.profile.addr, cnc_addr_, alloc_port(idx), kTelnetPort,
             Protocol::Tcp, PacketKind::CncRegister, kRegisterPayload, 0};
  send(idx, reg);
}

void Engine::on_cnc_packet(const Packet& packet) {
  const std::size_t dst_idx = index_of(packet.dst);
  DeviceRuntime& dst = nodes_[dst_idx];
  if (dst.profile.role == NodeRole::Cnc) {
    const CncAcceptOutcome outcome =
        cnc_registry_.accept(packet.src, packet.dst_port);
    const std::uint64_t accepted =
        outcome == CncAcceptOutcome::Rejected ? 0 : 1;
    Packet reply{dst.profile.addr, packet.src, packet.dst_port,
                 packet.src_port, Protocol::Tcp, PacketKind::CncRegister,
                 kRegisterPayload, accepted};
    send(dst_idx, reply);
    return;
  }
  // Registration acknowledgement back at the bot.
  if (packet.src == cnc_addr_ && packet.seq == 1) {
    dst.registered = true;
    if (std::holds_alternative<bot_state::Scanning>(dst.state))
      dst.state = bot_state::Registered{};
  }
}

void Engine::schedule_commands() {
  for (const CommandEntry& entry : config_.commands) {
    const FloodSpec spec = command_spec(entry.preset);
    const AttackCommand command{spec, entry.at};
    sim_.schedule(entry.at, [this, command] { issue_command(command); });
  }
}

FloodSpec Engine::command_spec(const std::string& preset) const {
  if (preset == "flood") return resolve_flood(config_, victim_addr_);
  const Ipv4Address target = config_.flood_target == "auto"
                                 ? victim_addr_
                                 : parse_ipv4(config_.flood_target);
  const auto spec = flood_preset(preset, target);
  if (!spec) throw ConfigError("unknown flood preset '" + preset + "'");
  return *spec;
}

void Engine::issue_command(const AttackCommand& command) {
  cnc_registry_.issue(command, [this](Ipv4Address addr, const AttackCommand& c) {
    if (!known(addr)) return;
    const std::size_t idx = index_of(addr);
    DeviceRuntime& bot = nodes_[idx];
    const SimTime ends_at = c.issue_at + c.spec.duration;
    bot.state = bot_state::Attacking{c.spec, ends_at};
    start_flood(idx, c.spec, c.issue_at);
    sim_.schedule(std::min(ends_at, sim_.horizon()), [this, idx, spec = c.spec] {
      DeviceRuntime& b = nodes_[idx];
      if (std::holds_alternative<bot_state::Attacking>(b.state)) {
        stop_flood(idx, spec);
        b.state = b.registered ? BotState{bot_state::Registered{}}
                               : BotState{bot_state::Scanning{}};
      }
    });
  });
}

SimTime Engine::data_srtt(const FloodSpec& spec) const {
  const std::uint64_t bits = std::uint64_t{spec.payload_bytes} * 8;
  const SimTime ser =
      (bits * kMicrosPerSecond + config_.link.bandwidth_bps - 1) /
      config_.link.bandwidth_bps;
  return 2 * config_.link.latency + ser;
}

void Engine::start_flood(std::size_t bot_idx, const FloodSpec& spec,
                         SimTime now) {
  validate(spec);
  DeviceRuntime& bot = nodes_[bot_idx];
  if (spec.protocol == Protocol::Udp) {
    for (std::uint32_t s = 0; s < spec.parallel_streams; ++s) {
      const std::uint16_t sport = alloc_port(bot_idx);
      flood_offered_.push_back(0);
      udp_emit(bot_idx, spec, now, sport, flood_offered_.size() - 1, 0);
    }
    return;
  }

  bot.tcp_gauge = spec.parallel_streams;
  bot.telemetry.set_tcp_states(bot.tcp_gauge);
  for (std::uint32_t s = 0; s < spec.parallel_streams; ++s) {
    TcpStream stream;
    stream.bot = bot_idx;
    stream.spec = spec;
    stream.src_port = alloc_port(bot_idx);
    stream.conn = make_tcp_conn(spec.payload_bytes, data_srtt(spec));
    stream.started = now;
    stream.flood_end = now + spec.duration;
    stream.open = true;
    flood_offered_.push_back(0);
    stream.offered_ledger = flood_offered_.size() - 1;
    tcp_streams_.push_back(stream);
    const std::size_t stream_idx = tcp_streams_.size() - 1;
    stream_by_port_[(static_cast<std::uint64_t>(bot_idx) << 16) |
                    stream.src_port] = stream_idx;
    Packet syn{bot.profile.addr, spec.target, stream.src_port,
               spec.target_port, Protocol::Tcp, PacketKind::Syn, 0, 0};
    send(bot_idx, syn);
  }
}

void Engine::stop_flood(std::size_t bot_idx, const FloodSpec& spec) {
  DeviceRuntime& bot = nodes_[bot_idx];
  bot.tcp_gauge = 0;
  bot.telemetry.set_tcp_states(0);
  for (TcpStream& s : tcp_streams_)
    if (s.bot == bot_idx) s.open = false;
  if (spec.protocol == Protocol::Tcp && known(spec.target)) {
    DeviceRuntime& victim = at(spec.target);
    victim.tcp_gauge = victim.tcp_gauge >= spec.parallel_streams
                           ? victim.tcp_gauge - spec.parallel_streams
                           : 0;
    victim.telemetry.set_tcp_states(victim.tcp_gauge);
  }
}

void Engine::udp_emit(std::size_t bot_idx, const FloodSpec& spec, SimTime t0,
                      std::uint16_t sport, std::size_t ledger,
                      std::uint64_t k) {
  const UdpSchedule schedule{spec.payload_bytes, spec.per_stream_rate_bps};
  const SimTime offset = schedule.emit_offset(k);
  if (offset >= spec.duration) return;
  sim_.schedule_clipped(t0 + offset, [this, bot_idx, spec, t0, sport, ledger, k] {
    DeviceRuntime& bot = nodes_[bot_idx];
    if (!std::holds_alternative<bot_state::Attacking>(bot.state)) return;
    ++flood_offered_[ledger];
    Packet data{bot.profile.addr, spec.target, sport, spec.target_port,
                Protocol::Udp, PacketKind::Data, spec.payload_bytes, k};
    send(bot_idx, data);
    udp_emit(bot_idx, spec, t0, sport, ledger, k + 1);
  });
}

void Engine::pump(std::size_t stream_idx) {
  TcpStream& s = tcp_streams_[stream_idx];
  if (!s.open || !s.handshake_done) return;
  const SimTime now = sim_.now();
  if (now >= s.flood_end) return;
  DeviceRuntime& bot = nodes_[s.bot];
  const std::uint32_t mss = s.conn.mss;
  while (s.conn.in_flight + mss <= s.conn.cwnd) {
    const SimTime allowed =
        s.started +
        s.bytes_offered * 8 * kMicrosPerSecond / s.spec.per_stream_rate_bps;
    if (allowed > now) {
      if (!s.pump_scheduled && allowed < s.flood_end) {
        s.pump_scheduled = true;
        sim_.schedule_clipped(allowed, [this, stream_idx] {
          tcp_streams_[stream_idx].pump_scheduled = false;
          pump(stream_idx);
        });
      }
      return;
    }
    s.bytes_offered += mss;
    s.conn.in_flight += mss;
    ++flood_offered_[s.offered_ledger];
    Packet data{bot.profile.addr, s.spec.target, s.src_port,
                s.spec.target_port, Protocol::Tcp, PacketKind::Data, mss,
                s.next_seq++};
    send(s.bot, data);
  }
}

void Engine::on_flood_syn(const Packet& packet) {
  const std::size_t idx = index_of(packet.dst);
  DeviceRuntime& victim = nodes_[idx];
  ++victim.tcp_gauge;
  victim.telemetry.set_tcp_states(victim.tcp_gauge);
  Packet reply{victim.profile.addr, packet.src, packet.dst_port,
               packet.src_port, Protocol::Tcp, PacketKind::SynAck, 0, 0};
  send(idx, reply);
}

void Engine::on_flood_synack(const Packet& packet) {
  const std::size_t bot_idx = index_of(packet.dst);
  const std::uint64_t key =
      (static_cast<std::uint64_t>(bot_idx) << 16) | packet.dst_port;
  auto it = stream_by_port_.find(key);
  if (it == stream_by_port_.end()) return;
  TcpStream& s = tcp_streams_[it->second];
  if (!s.open || s.handshake_done) return;
  s.handshake_done = true;
  Packet ack{nodes_[bot_idx].profile.addr, packet.src, packet.dst_port,
             packet.src_port, Protocol::Tcp, PacketKind::Ack, 0, 0};
  send(bot_idx, ack);
  pump(it->second);
}

void Engine::on_flood_data(const Packet& packet) {
  if (packet.protocol == Protocol::Udp) return;  // read and discarded
  const std::size_t idx = index_of(packet.dst);
  Packet ack{nodes_[idx].profile.addr, packet.src, packet.dst_port,
             packet.src_port, Protocol::Tcp, PacketKind::Ack, 0, packet.seq};
  send(idx, ack);
}

void Engine::on_flood_ack(const Packet& packet) {
  const std::size_t bot_idx = index_of(packet.dst);
  const std::uint64_t key =
      (static_cast<std::uint64_t>(bot_idx) << 16) | packet.dst_port;
  auto it = stream_by_port_.find(key);
  if (it == stream_by_port_.end()) return;
  TcpStream& s = tcp_streams_[it->second];
  if (!s.open) return;
  tcp_cwnd_update(s.conn, AckEvent{s.conn.mss});
  pump(it->second);
}

void Engine::schedule_sampler(std::uint64_t tick) {
  const SimTime t = tick * config_.telemetry.cadence;
  if (t > config_.horizon) return;
  sim_.schedule(t, [this, tick, t] {
    for (DeviceRuntime& node : nodes_) node.telemetry.sample(t);
    schedule_sampler(tick + 1);
  });
}

ScenarioResult Engine::run() {
  if (!nodes_.empty()) {
    schedule_commands();
    schedule_sampler(1);
  }
  const std::uint64_t processed = sim_.run();

  ScenarioResult result;
  result.events_processed = processed;
  result.trace = std::move(trace_);
  result.flood_offered_per_stream = std::move(flood_offered_);
  result.infection_timeline = std::move(infections_);
  result.cnc_registered = cnc_registry_.size();
  result.delivered_total = delivered_total_;
  for (const auto& [key, link] : links_) {
    result.wire_sent_total += link.delivered_scheduled();
    result.dropped_total += link.dropped();
  }
  result.in_flight_at_end = result.wire_sent_total - result.delivered_total;

  result.nodes.reserve(nodes_.size());
  for (DeviceRuntime& n : nodes_) {
    NodeResult out;
    out.name = n.name;
    out.addr = n.profile.addr;
    out.role = n.profile.role;
    out.infected = n.profile.infected;
    out.registered = n.registered;
    out.raw_samples = n.telemetry.samples();
    out.drivers = n.telemetry.driver_series();
    out.app_tx_packets = n.app_tx;
    out.wire_tx_packets = n.wire_tx;
    out.wire_tx_bytes = n.wire_tx_bytes;
    out.rx_packets = n.rx;
    out.rx_bytes = n.rx_bytes;
    out.rx_by_kind = n.rx_by_kind;
    out.wire_tx_by_kind = n.tx_by_kind;
    out.power_subsamples = n.telemetry.power_subsamples();
    result.nodes.push_back(std::move(out));
  }
  return result;
}

}  // namespace

DriverVector NodeResult::mean_drivers() const {
  DriverVector mean;
  if (drivers.empty()) return mean;
  for (const DriverVector& d : drivers) {
    mean.tx_pps += d.tx_pps;
    mean.rx_pps += d.rx_pps;
    mean.tcp_states += d.tcp_states;
    mean.log_kbps += d.log_kbps;
  }
  const double n = static_cast<double>(drivers.size());
  mean.tx_pps /= n;
  mean.rx_pps /= n;
  mean.tcp_states /= n;
  mean.log_kbps /= n;
  return mean;
}

const NodeResult& ScenarioResult::node(std::string_view name) const {
  for (const NodeResult& n : nodes)
    if (n.name == name) return n;
  throw SimError("no node named " + std::string(name));
}

bool ScenarioResult::has_node(std::string_view name) const {
  for (const NodeResult& n : nodes)
    if (n.name == name) return true;
  return false;
}

ScenarioResult run_scenario(const ScenarioConfig& config,
                            const ResourceModelParams& params) {
  config.validate();
  Engine engine(config, params);
  return engine.run();
}

}  // namespace miraisim
