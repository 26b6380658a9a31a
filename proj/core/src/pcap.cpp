#include "miraisim/pcap.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "miraisim/errors.hpp"

namespace miraisim {

namespace {

void put_u16le(std::string& buf, std::uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xFF));
  buf.push_back(static_cast<char>(v >> 8));
}

void put_u32le(std::string& buf, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8)
    buf.push_back(static_cast<char>((v >> shift) & 0xFF));
}

void put_u16be(std::string& buf, std::uint16_t v) {
  buf.push_back(static_cast<char>(v >> 8));
  buf.push_back(static_cast<char>(v & 0xFF));
}

void put_u32be(std::string& buf, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8)
    buf.push_back(static_cast<char>((v >> shift) & 0xFF));
}

void put_mac(std::string& buf, Ipv4Address addr) {
  // Locally administered MAC derived from the IPv4 address.
  buf.push_back(0x02);
  buf.push_back(0x00);
  put_u32be(buf, addr.value);
}

std::uint8_t tcp_flags_for(PacketKind kind) {
  switch (kind) {
    case PacketKind::Syn: return 0x02;
    case PacketKind::SynAck: return 0x12;
    case PacketKind::Ack: return 0x10;
    default: return 0x18;  // PSH|ACK carrier for every data-bearing kind
  }
}

PacketKind kind_from_tcp_flags(std::uint8_t flags) {
  switch (flags) {
    case 0x02: return PacketKind::Syn;
    case 0x12: return PacketKind::SynAck;
    case 0x10: return PacketKind::Ack;
    default: return PacketKind::Data;
  }
}

std::string synthesize_headers(const Packet& p) {
  std::string buf;
  buf.reserve(54);
  put_mac(buf, p.dst);
  put_mac(buf, p.src);
  put_u16be(buf, 0x0800);

  const std::uint16_t transport_len =
      p.protocol == Protocol::Tcp ? 20 : 8;
  const std::uint16_t ip_total =
      static_cast<std::uint16_t>(20 + transport_len + p.payload_bytes);
  buf.push_back(0x45);
  buf.push_back(0x00);
  put_u16be(buf, ip_total);
  put_u16be(buf, 0x0000);  // identification
  put_u16be(buf, 0x0000);  // flags + fragment offset
  buf.push_back(64);       // ttl
  buf.push_back(p.protocol == Protocol::Tcp ? 6 : 17);
  put_u16be(buf, 0x0000);  // checksum left zero
  put_u32be(buf, p.src.value);
  put_u32be(buf, p.dst.value);

  if (p.protocol == Protocol::Tcp) {
    put_u16be(buf, p.src_port);
    put_u16be(buf, p.dst_port);
    put_u32be(buf, static_cast<std::uint32_t>(p.seq));
    put_u32be(buf, 0);        // ack number
    buf.push_back(0x50);      // data offset 5 words
    buf.push_back(static_cast<char>(tcp_flags_for(p.kind)));
    put_u16be(buf, 0xFFFF);  // window
    put_u16be(buf, 0x0000);  // checksum
    put_u16be(buf, 0x0000);  // urgent
  } else {
    put_u16be(buf, p.src_port);
    put_u16be(buf, p.dst_port);
    put_u16be(buf, static_cast<std::uint16_t>(8 + p.payload_bytes));
    put_u16be(buf, 0x0000);  // checksum
  }
  return buf;
}

}  // namespace

std::size_t captured_length(const Packet& packet) {
  return wire_header_bytes(packet.protocol);
}

std::uint64_t write_trace(std::ostream& out,
                          const std::vector<TraceRecord>& records) {
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].timestamp < records[i - 1].timestamp)
      throw UnorderedRecordsError();

  std::string buf;
  buf.reserve(kPcapGlobalHeaderBytes +
              records.size() * (kPcapRecordHeaderBytes + 54));
  put_u32le(buf, kPcapMagic);
  put_u16le(buf, 2);   // version major
  put_u16le(buf, 4);   // version minor
  put_u32le(buf, 0);   // thiszone
  put_u32le(buf, 0);   // sigfigs
  put_u32le(buf, 65535);
  put_u32le(buf, kPcapLinktypeEthernet);

  for (const TraceRecord& r : records) {
    const std::string headers = synthesize_headers(r.packet);
    put_u32le(buf, static_cast<std::uint32_t>(r.timestamp / kMicrosPerSecond));
    put_u32le(buf, static_cast<std::uint32_t>(r.timestamp % kMicrosPerSecond));
    put_u32le(buf, static_cast<std::uint32_t>(headers.size()));
    put_u32le(buf, static_cast<std::uint32_t>(headers.size() +
                                              r.packet.payload_bytes));
    buf += headers;
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw SimError("trace write failed");
  return buf.size();
}

std::uint64_t write_trace(const std::string& path,
                          const std::vector<TraceRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  return write_trace(out, records);
}

namespace {

std::uint16_t get_u16le(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t get_u16be(const unsigned char* p) {
  return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}
std::uint32_t get_u32be(const unsigned char* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) |
         (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

}  // namespace

std::vector<TraceRecord> read_trace(std::istream& in) {
  unsigned char global[kPcapGlobalHeaderBytes];
  in.read(reinterpret_cast<char*>(global), sizeof(global));
  if (!in) throw SimError("trace shorter than a pcap global header");
  if (get_u32le(global) != kPcapMagic)
    throw SimError("bad pcap magic");
  if (get_u16le(global + 4) != 2 || get_u16le(global + 6) != 4)
    throw SimError("unsupported pcap version");
  if (get_u32le(global + 20) != kPcapLinktypeEthernet)
    throw SimError("unsupported pcap linktype");

  std::vector<TraceRecord> records;
  for (;;) {
    unsigned char rec[kPcapRecordHeaderBytes];
    in.read(reinterpret_cast<char*>(rec), sizeof(rec));
    if (in.gcount() == 0 && in.eof()) break;
    if (!in) throw SimError("truncated pcap record header");
    const std::uint32_t incl = get_u32le(rec + 8);
    const std::uint32_t orig = get_u32le(rec + 12);
    std::vector<unsigned char> body(incl);
    in.read(reinterpret_cast<char*>(body.data()), incl);
    if (!in) throw SimError("truncated pcap record body");
    if (incl < 14 + 20 + 8) throw SimError("pcap record too short to parse");

    TraceRecord r;
    r.timestamp = static_cast<SimTime>(get_u32le(rec)) * kMicrosPerSecond +
                  get_u32le(rec + 4);
    const unsigned char* ip = body.data() + 14;
    const std::uint8_t proto = ip[9];
    r.packet.src = Ipv4Address{get_u32be(ip + 12)};
    r.packet.dst = Ipv4Address{get_u32be(ip + 16)};
    const unsigned char* transport = ip + 20;
    r.packet.src_port = get_u16be(transport);
    r.packet.dst_port = get_u16be(transport + 2);
    if (proto == 6) {
      r.packet.protocol = Protocol::Tcp;
      r.packet.seq = get_u32be(transport + 4);
      r.packet.kind = kind_from_tcp_flags(transport[13]);
    } else if (proto == 17) {
      r.packet.protocol = Protocol::Udp;
      r.packet.kind = PacketKind::Data;
    } else {
      throw SimError("unsupported transport protocol in pcap");
    }
    r.packet.payload_bytes = orig - incl;
    records.push_back(r);
  }
  return records;
}

std::vector<TraceRecord> read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  return read_trace(in);
}

}  // namespace miraisim
