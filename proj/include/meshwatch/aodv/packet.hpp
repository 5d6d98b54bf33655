#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <variant>

#include "meshwatch/sim/types.hpp"

namespace meshwatch::aodv {

using sim::NodeId;

// Route request, flooded from the source. Carries the standard AODV fields
// plus two extension fields: next_to_source (the transmitter's reverse-path
// predecessor, or the source itself at the origin) and duplicate_flag (set
// iff the transmitter has already rebroadcast this flood).
struct Rreq {
    NodeId src_id = 0;
    NodeId dest_id = 0;
    std::uint32_t src_seq = 0;
    std::uint32_t dest_seq = 0;
    std::uint32_t bcast_id = 0;
    int ttl = 0;
    NodeId next_to_source = 0;
    bool duplicate_flag = false;
    NodeId transmitter = 0;
};

// Route reply, unicast hop by hop along the reverse path. next_to_destination
// is the extension field: the hop the receiver must forward to next (the
// source itself when the receiver is adjacent to it).
struct Rrep {
    NodeId src_id = 0;
    NodeId dest_id = 0;
    std::uint32_t dest_seq = 0;
    std::uint32_t hop_count = 0;
    NodeId next_to_destination = 0;
    NodeId receiver = 0;
    NodeId transmitter = 0;
};

using Packet = std::variant<Rreq, Rrep>;

inline bool is_rreq(const Packet& p) { return std::holds_alternative<Rreq>(p); }
inline bool is_rrep(const Packet& p) { return std::holds_alternative<Rrep>(p); }

inline NodeId transmitter_of(const Packet& p) {
    if (const auto* q = std::get_if<Rreq>(&p)) return q->transmitter;
    return std::get<Rrep>(p).transmitter;
}

inline std::string format_packet(const Packet& p) {
    std::ostringstream os;
    if (const auto* q = std::get_if<Rreq>(&p)) {
        os << "RREQ src=" << q->src_id << " dst=" << q->dest_id << " sseq=" << q->src_seq
           << " dseq=" << q->dest_seq << " bcast=" << q->bcast_id << " ttl=" << q->ttl
           << " nts=" << q->next_to_source << " dup=" << (q->duplicate_flag ? 1 : 0)
           << " tx=" << q->transmitter;
    } else {
        const auto& r = std::get<Rrep>(p);
        os << "RREP src=" << r.src_id << " dst=" << r.dest_id << " dseq=" << r.dest_seq
           << " hops=" << r.hop_count << " ntd=" << r.next_to_destination
           << " rx=" << r.receiver << " tx=" << r.transmitter;
    }
    return os.str();
}

} // namespace meshwatch::aodv
