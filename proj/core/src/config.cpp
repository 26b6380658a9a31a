#include "miraisim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "miraisim/errors.hpp"

namespace miraisim {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError(key + ": expected an unsigned integer, got '" + value + "'");
  return out;
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

std::map<Arch, double> parse_arch_mix(const std::string& value,
                                      const std::string& key) {
  std::map<Arch, double> mix;
  std::istringstream parts(value);
  std::string part;
  while (std::getline(parts, part, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos)
      throw ConfigError(key + ": expected arch:weight, got '" + part + "'");
    const Arch arch = parse_arch(trim(part.substr(0, colon)));
    const double weight = parse_double(trim(part.substr(colon + 1)), key);
    if (weight < 0) throw RangeViolationError(key + ": negative weight");
    mix[arch] = weight;
  }
  if (mix.empty()) throw ConfigError(key + ": empty mix");
  return mix;
}

CommandEntry parse_command_line(const std::string& line) {
  // Form: t=<n>s issue <preset>   (or t=<n>ms)
  std::istringstream fields(line);
  std::string t_field, verb, preset;
  if (!(fields >> t_field >> verb >> preset) || verb != "issue")
    throw ConfigError("commands: expected 't=<n>s issue <preset>', got '" +
                      line + "'");
  if (std::string extra; fields >> extra)
    throw ConfigError("commands: trailing field '" + extra + "'");
  if (t_field.rfind("t=", 0) != 0)
    throw ConfigError("commands: missing t= in '" + line + "'");
  std::string number = t_field.substr(2);
  SimTime unit = 0;
  if (number.size() > 2 && number.compare(number.size() - 2, 2, "ms") == 0) {
    unit = kMicrosPerMilli;
    number.resize(number.size() - 2);
  } else if (!number.empty() && number.back() == 's') {
    unit = kMicrosPerSecond;
    number.pop_back();
  } else {
    throw ConfigError("commands: time needs an s or ms suffix in '" + line +
                      "'");
  }
  CommandEntry entry;
  entry.at = parse_u64(number, "commands.t") * unit;
  entry.preset = preset;
  return entry;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (population.vulnerable_fraction < 0 || population.vulnerable_fraction > 1)
    throw RangeViolationError("population.vulnerable_fraction must lie in [0,1]");
  if (population.initial_bots > population.count)
    throw RangeViolationError("population.initial_bots exceeds count");
  if (population.credential_rule != "wordlist" &&
      population.credential_rule != "none")
    throw ConfigError("population.credential_rule must be wordlist or none");
  double mix_total = 0;
  for (const auto& [arch, weight] : population.arch_mix) mix_total += weight;
  if (mix_total <= 0)
    throw RangeViolationError("population.arch_mix weights sum to zero");

  if (!flood && !flood_preset)
    throw MissingRequiredError("flood.protocol (or flood.preset) is required");
  if (flood && flood_preset)
    throw ConfigError("flood: preset and explicit spec are mutually exclusive");
  SimTime flood_duration = 0;
  if (flood) {
    miraisim::validate(*flood);
    flood_duration = flood->duration;
  } else {
    const auto preset = miraisim::flood_preset(*flood_preset, Ipv4Address{0});
    if (!preset)
      throw ConfigError("flood.preset: unknown preset '" + *flood_preset + "'");
    flood_duration = preset->duration;
  }
  if (horizon < flood_duration)
    throw RangeViolationError("horizon must cover the flood duration");
  for (const CommandEntry& c : commands) {
    if (!miraisim::flood_preset(c.preset, Ipv4Address{0}) &&
        c.preset != "flood")
      throw ConfigError("commands: unknown preset '" + c.preset + "'");
    if (c.at > horizon)
      throw RangeViolationError("commands: issue time beyond horizon");
  }

  if (telemetry.cadence == 0 || horizon % telemetry.cadence != 0)
    throw RangeViolationError("telemetry.cadence must divide the horizon evenly");
  if (telemetry.overhead_fraction < 0 || telemetry.overhead_fraction >= 1)
    throw RangeViolationError("telemetry.overhead_fraction must lie in [0,1)");
  if (telemetry.capture != "victim" && telemetry.capture != "all" &&
      telemetry.capture != "none")
    throw ConfigError("telemetry.capture must be victim, all or none");

  if (link.bandwidth_bps == 0)
    throw RangeViolationError("link bandwidth must be positive");
  if (link.queue_capacity == 0)
    throw RangeViolationError("link queue capacity must be positive");

  if (flood_target != "auto") parse_ipv4(flood_target);
  if (flood_rate_mode != "per-stream" && flood_rate_mode != "aggregate")
    throw ConfigError("flood.rate_mode must be per-stream or aggregate");

  if (population.count + 10 > address_space.size())
    throw RangeViolationError("address_space too small for the population");
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig config;
  std::istringstream stream(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;

  auto fail_unknown = [&](const std::string& key) {
    throw UnknownKeyError("line " + std::to_string(line_no) +
                          ": unknown key '" + key + "' in section [" + section +
                          "]");
  };

  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "population" && section != "infrastructure" &&
          section != "flood" && section != "telemetry" && section != "commands")
        throw UnknownKeyError("line " + std::to_string(line_no) +
                              ": unknown section [" + section + "]");
      continue;
    }

    if (section == "commands") {
      config.commands.push_back(parse_command_line(line));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (section.empty()) {
      if (key == "seed") config.seed = parse_u64(value, key);
      else if (key == "horizon_s")
        config.horizon = seconds(parse_u64(value, key));
      else if (key == "address_space")
        config.address_space = parse_cidr(value);
      else fail_unknown(key);
    } else if (section == "population") {
      auto& p = config.population;
      if (key == "count") p.count = static_cast<std::uint32_t>(parse_u64(value, key));
      else if (key == "vulnerable_fraction")
        p.vulnerable_fraction = parse_double(value, key);
      else if (key == "arch_mix") p.arch_mix = parse_arch_mix(value, key);
      else if (key == "credential_rule") p.credential_rule = value;
      else if (key == "initial_bots")
        p.initial_bots = static_cast<std::uint32_t>(parse_u64(value, key));
      else if (key == "pre_registered") p.pre_registered = parse_bool(value, key);
      else if (key == "scan_probes_per_tick")
        p.scan_probes_per_tick = static_cast<std::uint32_t>(parse_u64(value, key));
      else if (key == "scan_tick_ms")
        p.scan_tick = milliseconds(parse_u64(value, key));
      else fail_unknown(key);
    } else if (section == "infrastructure") {
      auto& i = config.infrastructure;
      if (key == "cnc") { i.cnc = parse_ipv4(value); i.defaulted = false; }
      else if (key == "report") { i.report = parse_ipv4(value); i.defaulted = false; }
      else if (key == "loader") { i.loader = parse_ipv4(value); i.defaulted = false; }
      else if (key == "bandwidth_mbps")
        config.link.bandwidth_bps = parse_u64(value, key) * 1'000'000;
      else if (key == "latency_us") config.link.latency = parse_u64(value, key);
      else if (key == "queue_capacity")
        config.link.queue_capacity =
            static_cast<std::uint32_t>(parse_u64(value, key));
      else fail_unknown(key);
    } else if (section == "flood") {
      if (key == "preset") config.flood_preset = value;
      else if (key == "target") config.flood_target = value;
      else if (key == "rate_mode") config.flood_rate_mode = value;
      else {
        if (!config.flood) config.flood = FloodSpec{};
        if (key == "protocol") config.flood->protocol = parse_protocol(value);
        else if (key == "rate_mbps")
          config.flood->per_stream_rate_bps = parse_u64(value, key) * 1'000'000;
        else if (key == "payload_bytes")
          config.flood->payload_bytes =
              static_cast<std::uint32_t>(parse_u64(value, key));
        else if (key == "streams")
          config.flood->parallel_streams =
              static_cast<std::uint32_t>(parse_u64(value, key));
        else if (key == "duration_s")
          config.flood->duration = seconds(parse_u64(value, key));
        else if (key == "target_port")
          config.flood->target_port =
              static_cast<std::uint16_t>(parse_u64(value, key));
        else fail_unknown(key);
      }
    } else if (section == "telemetry") {
      auto& t = config.telemetry;
      if (key == "cadence_ms") t.cadence = milliseconds(parse_u64(value, key));
      else if (key == "overhead_fraction")
        t.overhead_fraction = parse_double(value, key);
      else if (key == "capture") t.capture = value;
      else if (key == "params") t.params_source = value;
      else fail_unknown(key);
    }
  }

  config.validate();
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream out;
  char buf[128];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };

  out << "seed = " << c.seed << "\n";
  out << "horizon_s = " << c.horizon / kMicrosPerSecond << "\n";
  out << "address_space = " << to_string(c.address_space) << "\n";

  out << "\n[population]\n";
  out << "count = " << c.population.count << "\n";
  out << "vulnerable_fraction = " << num(c.population.vulnerable_fraction) << "\n";
  out << "arch_mix = ";
  bool first = true;
  for (const auto& [arch, weight] : c.population.arch_mix) {
    if (!first) out << ",";
    out << to_string(arch) << ":" << num(weight);
    first = false;
  }
  out << "\n";
  out << "credential_rule = " << c.population.credential_rule << "\n";
  out << "initial_bots = " << c.population.initial_bots << "\n";
  out << "pre_registered = " << (c.population.pre_registered ? "true" : "false")
      << "\n";
  out << "scan_probes_per_tick = " << c.population.scan_probes_per_tick << "\n";
  out << "scan_tick_ms = " << c.population.scan_tick / kMicrosPerMilli << "\n";

  out << "\n[infrastructure]\n";
  if (c.infrastructure.cnc) out << "cnc = " << to_string(*c.infrastructure.cnc) << "\n";
  if (c.infrastructure.report)
    out << "report = " << to_string(*c.infrastructure.report) << "\n";
  if (c.infrastructure.loader)
    out << "loader = " << to_string(*c.infrastructure.loader) << "\n";
  out << "bandwidth_mbps = " << c.link.bandwidth_bps / 1'000'000 << "\n";
  out << "latency_us = " << c.link.latency << "\n";
  out << "queue_capacity = " << c.link.queue_capacity << "\n";

  out << "\n[flood]\n";
  if (c.flood_preset) out << "preset = " << *c.flood_preset << "\n";
  if (c.flood) {
    out << "protocol = " << to_string(c.flood->protocol) << "\n";
    out << "rate_mbps = " << c.flood->per_stream_rate_bps / 1'000'000 << "\n";
    out << "payload_bytes = " << c.flood->payload_bytes << "\n";
    out << "streams = " << c.flood->parallel_streams << "\n";
    out << "duration_s = " << c.flood->duration / kMicrosPerSecond << "\n";
    out << "target_port = " << c.flood->target_port << "\n";
  }
  out << "target = " << c.flood_target << "\n";
  out << "rate_mode = " << c.flood_rate_mode << "\n";

  out << "\n[telemetry]\n";
  out << "cadence_ms = " << c.telemetry.cadence / kMicrosPerMilli << "\n";
  out << "overhead_fraction = " << num(c.telemetry.overhead_fraction) << "\n";
  out << "capture = " << c.telemetry.capture << "\n";
  out << "params = " << c.telemetry.params_source << "\n";

  if (!c.commands.empty()) {
    out << "\n[commands]\n";
    for (const CommandEntry& cmd : c.commands) {
      if (cmd.at % kMicrosPerSecond == 0)
        out << "t=" << cmd.at / kMicrosPerSecond << "s issue " << cmd.preset
            << "\n";
      else
        out << "t=" << cmd.at / kMicrosPerMilli << "ms issue " << cmd.preset
            << "\n";
    }
  }
  return out.str();
}

ScenarioConfig suite_config(std::uint64_t seed) {
  ScenarioConfig config;
  config.seed = seed;
  config.horizon = seconds(60);
  config.address_space = parse_cidr("10.0.0.0/16");
  config.population.count = 2;
  config.population.vulnerable_fraction = 0.0;
  config.population.initial_bots = 1;
  config.population.pre_registered = true;
  config.population.scan_probes_per_tick = 0;
  config.flood_preset = "paper-udp";
  return config;
}

FloodSpec resolve_flood(const ScenarioConfig& config, Ipv4Address victim) {
  const Ipv4Address target = config.flood_target == "auto"
                                 ? victim
                                 : parse_ipv4(config.flood_target);
  FloodSpec spec;
  if (config.flood_preset) {
    const auto preset = flood_preset(*config.flood_preset, target);
    if (!preset)
      throw ConfigError("unknown flood preset '" + *config.flood_preset + "'");
    spec = *preset;
  } else if (config.flood) {
    spec = *config.flood;
    spec.target = target;
    if (config.flood_rate_mode == "aggregate" && spec.parallel_streams > 0)
      spec.per_stream_rate_bps /= spec.parallel_streams;
  } else {
    throw MissingRequiredError("flood.protocol (or flood.preset) is required");
  }
  validate(spec);
  return spec;
}

}  // namespace miraisim
