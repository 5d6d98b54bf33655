#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "meshwatch/aodv/packet.hpp"
#include "meshwatch/sim/types.hpp"
#include "meshwatch/watchdog/fsm.hpp"

// Promiscuous per-node monitor. For every neighbor and every locally
// observable route discovery (LMU) it drives one FSM instance, accumulates
// the finalized transition sequences into 8x8 count matrices, and collects
// direct evidence of dropped control packets from the extension header
// fields. Timeouts are evaluated lazily: each machine carries its deadline,
// and any machine whose deadline has passed is finalized at that deadline
// the next time it is touched (or when a snapshot is taken). This is
// equivalent to firing timer events and keeps the event queue small.

namespace meshwatch::watchdog {

using aodv::NodeId;
using aodv::Packet;
using aodv::Rrep;
using aodv::Rreq;
using sim::Seconds;

// Identifies one flood: the (s_k, d_k) pair plus the broadcast id. RREPs do
// not carry the broadcast id, so a monitor maps them to the latest broadcast
// it saw for the pair; kUnknownBcast marks an LMU known only through RREPs.
struct LmuKey {
    NodeId src = 0;
    NodeId dst = 0;
    std::uint32_t bcast = 0;

    auto operator<=>(const LmuKey&) const = default;
};

inline constexpr std::uint32_t kUnknownBcast = std::numeric_limits<std::uint32_t>::max();

struct TransitionMatrix {
    std::array<std::array<std::uint32_t, kNumStates>, kNumStates> counts{};
    Seconds window_start = 0.0;
    Seconds window_end = 0.0;

    std::uint32_t& at(FsmState from, FsmState to) {
        return counts[state_index(from)][state_index(to)];
    }
    std::uint32_t at(FsmState from, FsmState to) const {
        return counts[state_index(from)][state_index(to)];
    }
    std::uint32_t column_sum(FsmState to) const {
        std::uint32_t sum = 0;
        for (int i = 0; i < kNumStates; ++i) sum += counts[i][state_index(to)];
        return sum;
    }
    std::array<std::uint32_t, kNumStates> row(int i) const { return counts[i]; }
};

/// Fraction of finalized LMUs that completed (state 7) among all finalized
/// LMUs (states 5, 7, 8). Returns 0.5 when nothing finalized.
inline double cooperation_index(const TransitionMatrix& m) {
    double n5 = m.column_sum(FsmState::TimeoutRreq);
    double n7 = m.column_sum(FsmState::LmuComplete);
    double n8 = m.column_sum(FsmState::TimeoutRrep);
    double denom = n5 + n7 + n8;
    if (denom == 0.0) return 0.5;
    return n7 / denom;
}

enum class EvidenceKind { RreqDrop, RrepDrop, Misdirect };

struct EvidenceCounters {
    std::uint32_t rreq_drop = 0;
    std::uint32_t rrep_drop = 0;
    std::uint32_t misdirect = 0;

    std::uint32_t total() const { return rreq_drop + rrep_drop + misdirect; }
};

struct EvidenceEvent {
    Seconds t = 0.0;
    NodeId neighbor = 0;
    EvidenceKind kind = EvidenceKind::RreqDrop;
    LmuKey key;
};

struct FinalizedLmu {
    LmuKey key;
    NodeId neighbor = 0;
    std::vector<std::pair<FsmState, FsmState>> transitions;
    FsmState final_state = FsmState::Init;
    Seconds finalized_at = 0.0;
};

struct TransitionTraceEntry {
    Seconds t = 0.0;
    NodeId monitor = 0;
    NodeId neighbor = 0;
    LmuKey key;
    FsmState from = FsmState::Init;
    FsmState to = FsmState::Init;
};

class Watchdog {
  public:
    Watchdog() = default;
    Watchdog(NodeId monitor, std::vector<NodeId> neighbors, Seconds rreq_timeout,
             Seconds rrep_timeout)
        : monitor_(monitor),
          neighbors_(std::move(neighbors)),
          rreq_timeout_(rreq_timeout),
          rrep_timeout_(rrep_timeout) {
        std::sort(neighbors_.begin(), neighbors_.end());
    }

    NodeId monitor() const { return monitor_; }
    const std::vector<NodeId>& neighbors() const { return neighbors_; }

    void enable_trace(bool on) { trace_enabled_ = on; }
    const std::vector<TransitionTraceEntry>& trace() const { return trace_; }

    /// Feed one observed transmission (a neighbor's, or the monitor's own).
    void observe(const Packet& packet, Seconds t) {
        if (const auto* rreq = std::get_if<Rreq>(&packet)) {
            observe_rreq(*rreq, t);
        } else {
            observe_rrep(std::get<Rrep>(packet), t);
        }
    }

    /// Finalize every machine whose timeout deadline has passed.
    void advance_to(Seconds t) {
        std::vector<MachineKey> due;
        for (auto& [mk, rec] : live_) {
            if (rec.deadline <= t) due.push_back(mk);
        }
        for (const auto& mk : due) {
            auto it = live_.find(mk);
            finalize_deadline(mk, it->second);
            live_.erase(it);
        }
    }

    struct NeighborSnapshot {
        TransitionMatrix matrix;
        EvidenceCounters evidence;
    };

    /// Counts from LMUs finalized within [now - window, now], per neighbor.
    /// Evidence counters are restricted to the same window.
    std::map<NodeId, NeighborSnapshot> snapshot(Seconds now, Seconds window) {
        advance_to(now);
        std::map<NodeId, NeighborSnapshot> out;
        const Seconds start = now - window;
        for (NodeId nb : neighbors_) {
            out[nb].matrix.window_start = start;
            out[nb].matrix.window_end = now;
        }
        for (const auto& rec : archive_) {
            if (rec.finalized_at < start || rec.finalized_at > now) continue;
            auto it = out.find(rec.neighbor);
            if (it == out.end()) continue;
            for (auto [from, to] : rec.transitions) ++it->second.matrix.at(from, to);
        }
        for (const auto& ev : evidence_) {
            if (ev.t < start || ev.t > now) continue;
            auto it = out.find(ev.neighbor);
            if (it == out.end()) continue;
            bump(it->second.evidence, ev.kind);
        }
        return out;
    }

    const std::vector<FinalizedLmu>& finalized() const { return archive_; }
    const std::vector<EvidenceEvent>& evidence_events() const { return evidence_; }

    /// Whole-run evidence for one neighbor.
    EvidenceCounters evidence_total(NodeId neighbor) const {
        EvidenceCounters c;
        for (const auto& ev : evidence_) {
            if (ev.neighbor == neighbor) bump(c, ev.kind);
        }
        return c;
    }

  private:
    using MachineKey = std::pair<LmuKey, NodeId>;

    struct Record {
        FsmState state = FsmState::Init;
        Seconds entered_at = 0.0;
        Seconds deadline = std::numeric_limits<Seconds>::infinity();
        std::vector<std::pair<FsmState, FsmState>> transitions;
        bool monitor_sent_rreq = false;
        bool x_transmitted = false;       // any transmission by the neighbor in this LMU
        bool rreq_evidence_armed = false; // set by rule (a) preconditions
        bool rrep_evidence_armed = false; // set by rule (b) preconditions
        bool has_expected_next = false;
        NodeId expected_next = 0; // next_to_destination of the RREP the neighbor received
    };

    static void bump(EvidenceCounters& c, EvidenceKind k) {
        switch (k) {
        case EvidenceKind::RreqDrop: ++c.rreq_drop; break;
        case EvidenceKind::RrepDrop: ++c.rrep_drop; break;
        case EvidenceKind::Misdirect: ++c.misdirect; break;
        }
    }

    bool is_neighbor(NodeId v) const {
        return std::binary_search(neighbors_.begin(), neighbors_.end(), v);
    }

    // Returns the live machine for (key, neighbor), creating it on demand.
    // A machine whose deadline has passed is finalized first; nullptr means
    // the machine already terminated (final states absorb everything).
    Record* touch(const LmuKey& key, NodeId neighbor, Seconds t) {
        MachineKey mk{key, neighbor};
        auto it = live_.find(mk);
        if (it != live_.end()) {
            if (t >= it->second.deadline) {
                finalize_deadline(mk, it->second);
                live_.erase(it);
                return nullptr;
            }
            return &it->second;
        }
        if (done_.count(mk)) return nullptr;
        Record rec;
        rec.entered_at = t;
        return &live_.emplace(mk, std::move(rec)).first->second;
    }

    void step(const MachineKey& mk, Record& rec, FsmState to, Seconds t) {
        FsmState from = rec.state;
        rec.transitions.emplace_back(from, to);
        rec.state = to;
        rec.entered_at = t;
        if (trace_enabled_) trace_.push_back({t, monitor_, mk.second, mk.first, from, to});
        if (is_final(to)) {
            archive_.push_back({mk.first, mk.second, rec.transitions, to, t});
            done_.insert(mk);
        }
    }

    // Timeout: states 3,4 fall to 5; states 2,6 fall to 8. Evidence fires
    // when the arming preconditions held and the neighbor stayed silent.
    void finalize_deadline(const MachineKey& mk, Record& rec) {
        Seconds t = rec.deadline;
        FsmState to;
        if (rec.state == FsmState::RcvdRreq || rec.state == FsmState::FwdRreq) {
            to = FsmState::TimeoutRreq;
        } else {
            to = FsmState::TimeoutRrep;
        }
        step(mk, rec, to, t);
        if (to == FsmState::TimeoutRreq && rec.rreq_evidence_armed && !rec.x_transmitted) {
            add_evidence(mk.first, mk.second, EvidenceKind::RreqDrop, t);
        }
        if (to == FsmState::TimeoutRrep && rec.rrep_evidence_armed) {
            add_evidence(mk.first, mk.second, EvidenceKind::RrepDrop, t);
        }
    }

    // At most one evidence event per (LMU, neighbor, kind).
    void add_evidence(const LmuKey& key, NodeId neighbor, EvidenceKind kind, Seconds t) {
        if (!evidence_dedup_.insert({key, neighbor, static_cast<int>(kind)}).second) return;
        evidence_.push_back({t, neighbor, kind, key});
    }

    void observe_rreq(const Rreq& rreq, Seconds t) {
        LmuKey key{rreq.src_id, rreq.dest_id, rreq.bcast_id};
        auto& latest = lmu_bcast_[{rreq.src_id, rreq.dest_id}];
        if (rreq.bcast_id != kUnknownBcast && (latest == 0 || rreq.bcast_id > latest))
            latest = rreq.bcast_id;

        if (rreq.transmitter == monitor_) {
            // Our own broadcast: every neighbor is assumed to receive it.
            for (NodeId nb : neighbors_) {
                Record* rec = touch(key, nb, t);
                if (!rec) continue;
                rec->monitor_sent_rreq = true;
                if (rec->state == FsmState::Init) {
                    bool armable = !rreq.duplicate_flag && nb != rreq.src_id &&
                                   nb != rreq.dest_id && rreq.ttl > 0 && !rec->x_transmitted;
                    rec->rreq_evidence_armed = armable;
                    rec->deadline = t + rreq_timeout_;
                    step({key, nb}, *rec, FsmState::RcvdRreq, t);
                } else if (rec->state == FsmState::FwdRreq) {
                    rec->deadline = t + rreq_timeout_;
                    step({key, nb}, *rec, FsmState::FwdRreq, t);
                }
            }
            return;
        }

        if (!is_neighbor(rreq.transmitter)) return;
        NodeId x = rreq.transmitter;
        Record* rec = touch(key, x, t);
        if (!rec) return;
        rec->x_transmitted = true;
        rec->rreq_evidence_armed = false;
        switch (rec->state) {
        case FsmState::Init:
        case FsmState::RcvdRreq:
        case FsmState::FwdRreq:
            rec->deadline = t + rreq_timeout_;
            step({key, x}, *rec, FsmState::FwdRreq, t);
            break;
        default:
            break;
        }
    }

    void observe_rrep(const Rrep& rrep, Seconds t) {
        auto it = lmu_bcast_.find({rrep.src_id, rrep.dest_id});
        std::uint32_t bcast = it == lmu_bcast_.end() ? kUnknownBcast : it->second;
        LmuKey key{rrep.src_id, rrep.dest_id, bcast};

        // The transmitter forwarded (or originated) a RREP.
        if (rrep.transmitter != monitor_ && is_neighbor(rrep.transmitter)) {
            NodeId x = rrep.transmitter;
            Record* rec = touch(key, x, t);
            if (rec) {
                rec->x_transmitted = true;
                rec->rreq_evidence_armed = false;
                switch (rec->state) {
                case FsmState::UnexpRrep:
                case FsmState::RcvdRreq:
                case FsmState::FwdRreq:
                case FsmState::RcvdRrep:
                    if (rec->has_expected_next && rrep.receiver != rec->expected_next) {
                        add_evidence(key, x, EvidenceKind::Misdirect, t);
                    }
                    step({key, x}, *rec, FsmState::LmuComplete, t);
                    break;
                default:
                    break; // no legal transition from Init; transmission noted
                }
            }
        }

        // The addressed next hop received a RREP and now owes a forward
        // (unless it is the discovery source, where the reply terminates).
        if (rrep.receiver != monitor_ && is_neighbor(rrep.receiver)) {
            NodeId x = rrep.receiver;
            Record* rec = touch(key, x, t);
            if (!rec) return;
            FsmState to;
            switch (rec->state) {
            case FsmState::Init: to = FsmState::UnexpRrep; break;
            case FsmState::RcvdRreq:
            case FsmState::FwdRreq: to = FsmState::RcvdRrep; break;
            default: return;
            }
            rec->deadline = t + rrep_timeout_;
            rec->has_expected_next = true;
            rec->expected_next = rrep.next_to_destination;
            rec->rrep_evidence_armed = x != rrep.src_id && x != rrep.dest_id;
            step({key, x}, *rec, to, t);
        }
    }

    NodeId monitor_ = 0;
    std::vector<NodeId> neighbors_;
    Seconds rreq_timeout_ = 0.5;
    Seconds rrep_timeout_ = 3.0;

    std::map<MachineKey, Record> live_;
    std::set<MachineKey> done_;
    std::vector<FinalizedLmu> archive_;
    std::vector<EvidenceEvent> evidence_;
    std::set<std::tuple<LmuKey, NodeId, int>> evidence_dedup_;
    std::map<std::pair<NodeId, NodeId>, std::uint32_t> lmu_bcast_;
    bool trace_enabled_ = false;
    std::vector<TransitionTraceEntry> trace_;
};

} // namespace meshwatch::watchdog
