#ifndef MIRAISIM_PACKET_HPP
#define MIRAISIM_PACKET_HPP

#include <cstdint>
#include <string_view>

#include "miraisim/ipv4.hpp"

namespace miraisim {

enum class Protocol : std::uint8_t { Tcp, Udp };

enum class PacketKind : std::uint8_t {
  Syn,
  SynAck,
  Ack,
  Data,
  TelnetPrompt,
  TelnetCred,
  CncRegister,
  CncCommand,
  LoaderPayload,
};

inline constexpr int kPacketKindCount = 9;

std::string_view to_string(Protocol protocol);
std::string_view to_string(PacketKind kind);
Protocol parse_protocol(std::string_view text);
PacketKind parse_packet_kind(std::string_view text);

struct Packet {
  Ipv4Address src;
  Ipv4Address dst;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  Protocol protocol = Protocol::Tcp;
  PacketKind kind = PacketKind::Data;
  std::uint32_t payload_bytes = 0;
  std::uint64_t seq = 0;
};

// SYN / SYN-ACK / ACK exist only for TCP; everything else is free.
constexpr bool kind_matches_protocol(PacketKind kind, Protocol protocol) {
  switch (kind) {
    case PacketKind::Syn:
    case PacketKind::SynAck:
    case PacketKind::Ack:
      return protocol == Protocol::Tcp;
    default:
      return true;
  }
}

// Ethernet + IPv4 + L4 header bytes as synthesized into traces.
constexpr std::uint32_t wire_header_bytes(Protocol protocol) {
  return protocol == Protocol::Tcp ? 14 + 20 + 20 : 14 + 20 + 8;
}

constexpr std::uint64_t wire_bytes(const Packet& p) {
  return wire_header_bytes(p.protocol) + p.payload_bytes;
}

}  // namespace miraisim

#endif
