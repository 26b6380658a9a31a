#ifndef MIRAISIM_PCAP_HPP
#define MIRAISIM_PCAP_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "miraisim/packet.hpp"
#include "miraisim/sim_time.hpp"

namespace miraisim {

struct TraceRecord {
  SimTime timestamp = 0;
  Packet packet;
};

constexpr std::uint32_t kPcapMagic = 0xA1B2C3D4;
constexpr std::uint32_t kPcapLinktypeEthernet = 1;
constexpr std::size_t kPcapGlobalHeaderBytes = 24;
constexpr std::size_t kPcapRecordHeaderBytes = 16;

// Captured bytes for a record: synthesized Ethernet/IP/transport headers
// only, no payload.
std::size_t captured_length(const Packet& packet);

// Classic little-endian pcap. Records must be timestamp-ordered
// (UnorderedRecordsError otherwise). Returns bytes written.
std::uint64_t write_trace(std::ostream& out,
                          const std::vector<TraceRecord>& records);
std::uint64_t write_trace(const std::string& path,
                          const std::vector<TraceRecord>& records);

// Rebuilds records from a capture produced by write_trace. Transport flags
// map back onto packet kinds Syn/SynAck/Ack/Data; original payload size is
// recovered from the length fields.
std::vector<TraceRecord> read_trace(std::istream& in);
std::vector<TraceRecord> read_trace(const std::string& path);

}  // namespace miraisim

#endif
