#include "miraisim/packet.hpp"

#include "miraisim/errors.hpp"

namespace miraisim {

std::string_view to_string(Protocol protocol) {
  return protocol == Protocol::Tcp ? "tcp" : "udp";
}

Protocol parse_protocol(std::string_view text) {
  if (text == "tcp") return Protocol::Tcp;
  if (text == "udp") return Protocol::Udp;
  throw ConfigError("invalid protocol: " + std::string(text));
}

std::string_view to_string(PacketKind kind) {
  switch (kind) {
    case PacketKind::Syn: return "syn";
    case PacketKind::SynAck: return "syn-ack";
    case PacketKind::Ack: return "ack";
    case PacketKind::Data: return "data";
    case PacketKind::TelnetPrompt: return "telnet-prompt";
    case PacketKind::TelnetCred: return "telnet-cred";
    case PacketKind::CncRegister: return "cnc-register";
    case PacketKind::CncCommand: return "cnc-command";
    case PacketKind::LoaderPayload: return "loader-payload";
  }
  return "unknown";
}

PacketKind parse_packet_kind(std::string_view text) {
  for (int i = 0; i < kPacketKindCount; ++i) {
    const auto kind = static_cast<PacketKind>(i);
    if (to_string(kind) == text) return kind;
  }
  throw ConfigError("invalid packet kind: " + std::string(text));
}

}  // namespace miraisim
