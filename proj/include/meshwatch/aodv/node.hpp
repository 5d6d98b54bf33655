#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>

#include "meshwatch/aodv/packet.hpp"
#include "meshwatch/aodv/policy.hpp"
#include "meshwatch/sim/types.hpp"

namespace meshwatch::aodv {

using sim::Seconds;

struct RouteCacheEntry {
    NodeId dest_id = 0;
    NodeId next_hop = 0;
    std::uint32_t dest_seq = 0;
    Seconds expiry = 0.0; // valid iff now < expiry
};

// Hooks the node needs from the simulation driver. send() must schedule the
// transmission as its own event at the current time, not transmit inline, so
// that deliveries already queued at this instant are observed first.
class NodeServices {
  public:
    virtual ~NodeServices() = default;
    virtual void send(const Packet& packet) = 0;
    virtual double policy_draw() = 0; // per-node stream, consumed only on drop decisions
};

struct NodeConfig {
    int ttl = 30;
    Seconds rreq_timeout = 0.5;        // reverse-path entry lifetime
    Seconds active_route_timeout = 10.0;
};

// Simplified AODV control plane for one node: RREQ flooding with duplicate
// suppression, reverse-path setup, RREP unicast along the reverse path, and
// a small route cache. Behavior policies inject selfish drops.
class Node {
  public:
    Node() = default;
    Node(NodeId id, BehaviorPolicy policy, NodeConfig cfg)
        : id_(id), policy_(policy), cfg_(cfg) {}

    NodeId id() const { return id_; }
    const BehaviorPolicy& policy() const { return policy_; }

    // ground truth and diagnostics
    std::uint64_t dropped_rreq() const { return dropped_rreq_; }
    std::uint64_t dropped_rrep() const { return dropped_rrep_; }
    std::uint64_t dropped_control() const { return dropped_rreq_ + dropped_rrep_; }
    std::uint64_t orphan_rrep() const { return orphan_rrep_; }
    std::uint64_t completed_discoveries() const { return completed_; }

    bool has_valid_route(NodeId dest, Seconds now) const {
        auto it = cache_.find(dest);
        return it != cache_.end() && now < it->second.expiry;
    }

    /// Start a route discovery unless a valid cached route exists.
    void originate_discovery(NodeId dest, Seconds now, NodeServices& svc) {
        if (dest == id_) return;
        if (has_valid_route(dest, now)) return;
        Rreq rreq;
        rreq.src_id = id_;
        rreq.dest_id = dest;
        rreq.src_seq = ++seq_num_;
        auto ks = known_seq_.find(dest);
        rreq.dest_seq = ks == known_seq_.end() ? 0 : ks->second;
        rreq.bcast_id = ++bcast_counter_;
        rreq.ttl = cfg_.ttl;
        rreq.next_to_source = id_;
        rreq.duplicate_flag = false;
        rreq.transmitter = id_;
        seen_.insert({id_, rreq.bcast_id});
        svc.send(Packet{rreq});
    }

    void handle_rreq(const Rreq& rreq, Seconds now, NodeServices& svc) {
        if (rreq.src_id == id_) return; // echo of our own flood
        FloodKey flood{rreq.src_id, rreq.bcast_id};
        if (seen_.count(flood)) return; // duplicate suppression
        seen_.insert(flood);

        // reverse-path entry toward the source, deleted after rreq_timeout
        ReverseEntry& rev = reverse_[{rreq.src_id, rreq.dest_id}];
        rev.bcast_id = rreq.bcast_id;
        rev.predecessor = rreq.transmitter;
        rev.pred_next = rreq.next_to_source; // the predecessor's own next hop to the source
        rev.expiry = now + cfg_.rreq_timeout;

        if (rreq.src_seq > known_seq_[rreq.src_id]) known_seq_[rreq.src_id] = rreq.src_seq;

        if (rreq.dest_id == id_) {
            if (rreq.dest_seq > seq_num_) seq_num_ = rreq.dest_seq;
            send_rrep(rreq.src_id, rreq.dest_id, seq_num_, 0, rev, svc);
            return;
        }

        // answer from cache only when fresh enough; DropRep nodes always
        // rebroadcast instead, even with a route in cache
        if (policy_.kind != PolicyKind::DropRep) {
            auto it = cache_.find(rreq.dest_id);
            if (it != cache_.end() && now < it->second.expiry &&
                it->second.dest_seq >= rreq.dest_seq) {
                send_rrep(rreq.src_id, rreq.dest_id, it->second.dest_seq, 0, rev, svc);
                return;
            }
        }

        if (rreq.ttl <= 0) return; // hop budget exhausted
        if (policy_.kind == PolicyKind::DropReq &&
            decide_drop(policy_, PacketKind::Rreq, svc.policy_draw())) {
            ++dropped_rreq_;
            return;
        }

        Rreq fwd = rreq;
        fwd.ttl = rreq.ttl - 1;
        fwd.next_to_source = rreq.transmitter;
        fwd.duplicate_flag = rebroadcast_.count(flood) > 0;
        fwd.transmitter = id_;
        rebroadcast_.insert(flood);
        svc.send(Packet{fwd});
    }

    void handle_rrep(const Rrep& rrep, Seconds now, NodeServices& svc) {
        if (rrep.receiver != id_) return; // overheard only

        RouteCacheEntry& entry = cache_[rrep.dest_id];
        entry.dest_id = rrep.dest_id;
        entry.next_hop = rrep.transmitter;
        entry.dest_seq = rrep.dest_seq;
        entry.expiry = now + cfg_.active_route_timeout;
        if (rrep.dest_seq > known_seq_[rrep.dest_id]) known_seq_[rrep.dest_id] = rrep.dest_seq;

        if (rrep.src_id == id_) {
            ++completed_;
            return;
        }

        auto it = reverse_.find({rrep.src_id, rrep.dest_id});
        if (it == reverse_.end() || now >= it->second.expiry) {
            ++orphan_rrep_; // reverse entry already deleted; ignore
            return;
        }

        if (policy_.kind == PolicyKind::DropRep &&
            decide_drop(policy_, PacketKind::Rrep, svc.policy_draw())) {
            ++dropped_rrep_;
            return;
        }
        send_rrep(rrep.src_id, rrep.dest_id, rrep.dest_seq, rrep.hop_count + 1, it->second, svc);
    }

  private:
    using FloodKey = std::pair<NodeId, std::uint32_t>; // (src, bcast)

    struct ReverseEntry {
        std::uint32_t bcast_id = 0;
        NodeId predecessor = 0; // where the first RREQ copy came from
        NodeId pred_next = 0;   // the predecessor's next hop toward the source
        Seconds expiry = 0.0;
    };

    void send_rrep(NodeId src, NodeId dest, std::uint32_t dest_seq, std::uint32_t hops,
                   const ReverseEntry& rev, NodeServices& svc) {
        Rrep rrep;
        rrep.src_id = src;
        rrep.dest_id = dest;
        rrep.dest_seq = dest_seq;
        rrep.hop_count = hops;
        rrep.receiver = rev.predecessor;
        rrep.next_to_destination = rev.predecessor == src ? src : rev.pred_next;
        rrep.transmitter = id_;
        svc.send(Packet{rrep});
    }

    NodeId id_ = 0;
    BehaviorPolicy policy_;
    NodeConfig cfg_;
    std::uint32_t seq_num_ = 0;
    std::uint32_t bcast_counter_ = 0;
    std::set<FloodKey> seen_;
    std::set<FloodKey> rebroadcast_;
    std::map<std::pair<NodeId, NodeId>, ReverseEntry> reverse_; // (src, dst)
    std::map<NodeId, RouteCacheEntry> cache_;
    std::map<NodeId, std::uint32_t> known_seq_;
    std::uint64_t dropped_rreq_ = 0;
    std::uint64_t dropped_rrep_ = 0;
    std::uint64_t orphan_rrep_ = 0;
    std::uint64_t completed_ = 0;
};

} // namespace meshwatch::aodv
