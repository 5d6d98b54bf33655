#pragma once

namespace meshwatch::aodv {

enum class PolicyKind {
    Cooperative,
    DropReq, // drops RREQs it should rebroadcast
    DropRep, // drops RREPs it should forward; never answers RREQs from cache
};

enum class PacketKind { Rreq, Rrep };

struct BehaviorPolicy {
    PolicyKind kind = PolicyKind::Cooperative;
    double drop_probability = 0.0;
};

/// True iff the policy targets this packet class and the draw falls under
/// the drop probability. Cooperative never drops.
inline bool decide_drop(const BehaviorPolicy& policy, PacketKind packet_kind, double rng_draw) {
    switch (policy.kind) {
    case PolicyKind::Cooperative:
        return false;
    case PolicyKind::DropReq:
        return packet_kind == PacketKind::Rreq && rng_draw < policy.drop_probability;
    case PolicyKind::DropRep:
        return packet_kind == PacketKind::Rrep && rng_draw < policy.drop_probability;
    }
    return false;
}

} // namespace meshwatch::aodv
