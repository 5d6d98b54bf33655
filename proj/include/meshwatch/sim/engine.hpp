#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <variant>
#include <vector>

#include "meshwatch/sim/rng.hpp"
#include "meshwatch/sim/topology.hpp"
#include "meshwatch/sim/types.hpp"

// Deterministic discrete-event engine over a static unit-disk topology.
// Every transmission is delivered (subject to independent loss draws) to all
// in-range nodes of the sender, so monitors can overhear unicast traffic.
// Events with equal time are processed in schedule order (seq tie-break),
// which makes a run a pure function of (config, seed).

namespace meshwatch::sim {

struct PastEventError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RadioModel {
    double loss_probability = 0.0; // per (transmission, receiver)
    double jitter_min = 0.001;     // per-hop processing/propagation delay bounds
    double jitter_max = 0.005;
};

template <typename PacketT>
struct Delivery {
    PacketT packet;
    NodeId receiver;
    NodeId sender;
};

struct Timer {
    NodeId owner;
    std::uint64_t key;
};

struct SessionStart {
    NodeId src;
    NodeId dst;
};

struct DetectionTick {};

template <typename PacketT>
struct Event {
    Seconds time = 0.0;
    std::uint64_t seq = 0;
    std::variant<Delivery<PacketT>, Timer, SessionStart, DetectionTick> kind;
};

template <typename PacketT>
class EventHandler {
  public:
    virtual ~EventHandler() = default;
    virtual void on_delivery(const PacketT& packet, NodeId receiver, Seconds t) = 0;
    virtual void on_timer(NodeId owner, std::uint64_t key, Seconds t) = 0;
    virtual void on_session_start(NodeId src, NodeId dst, Seconds t) = 0;
    virtual void on_detection_tick(Seconds t) = 0;
};

template <typename PacketT>
class Engine {
  public:
    Engine(Topology topology, RadioModel radio, std::uint64_t seed)
        : topology_(std::move(topology)), radio_(radio), rng_(seed) {}

    Seconds now() const { return now_; }
    const Topology& topology() const { return topology_; }
    const RadioModel& radio() const { return radio_; }
    std::uint64_t processed_count() const { return processed_; }

    void schedule_delivery(Seconds t, const PacketT& packet, NodeId receiver, NodeId sender) {
        push(t, Delivery<PacketT>{packet, receiver, sender});
    }
    void schedule_timer(Seconds t, NodeId owner, std::uint64_t key) {
        push(t, Timer{owner, key});
    }
    void schedule_session(Seconds t, NodeId src, NodeId dst) {
        push(t, SessionStart{src, dst});
    }
    void schedule_detection_tick(Seconds t) { push(t, DetectionTick{}); }

    /// Broadcast on the radio: every in-range neighbor of the sender gets an
    /// independent loss draw; survivors receive a Delivery at t plus jitter.
    /// Unicast intent is carried inside the packet, not by the radio.
    void transmit(NodeId sender, const PacketT& packet, Seconds t) {
        for (NodeId v : topology_.neighbors(sender)) {
            double draw = rng_.uniform01();
            if (draw < radio_.loss_probability) continue;
            double jitter = rng_.uniform(radio_.jitter_min, radio_.jitter_max);
            schedule_delivery(t + jitter, packet, v, sender);
        }
    }

    /// Process all events with time <= t_end in (time, seq) order, then
    /// advance the clock to t_end.
    void run_until(Seconds t_end, EventHandler<PacketT>& handler) {
        if (t_end < now_) throw PastEventError("run_until: t_end before current time");
        while (!queue_.empty() && queue_.top().time <= t_end) {
            Event<PacketT> ev = queue_.top();
            queue_.pop();
            now_ = ev.time;
            ++processed_;
            dispatch(ev, handler);
        }
        now_ = t_end;
    }

    Rng& rng() { return rng_; }

  private:
    struct Later {
        bool operator()(const Event<PacketT>& a, const Event<PacketT>& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    template <typename KindT>
    void push(Seconds t, KindT&& kind) {
        if (t < now_) throw PastEventError("schedule: event time before current time");
        Event<PacketT> ev;
        ev.time = t;
        ev.seq = next_seq_++;
        ev.kind = std::forward<KindT>(kind);
        queue_.push(std::move(ev));
    }

    void dispatch(const Event<PacketT>& ev, EventHandler<PacketT>& handler) {
        if (const auto* d = std::get_if<Delivery<PacketT>>(&ev.kind)) {
            handler.on_delivery(d->packet, d->receiver, ev.time);
        } else if (const auto* tm = std::get_if<Timer>(&ev.kind)) {
            handler.on_timer(tm->owner, tm->key, ev.time);
        } else if (const auto* s = std::get_if<SessionStart>(&ev.kind)) {
            handler.on_session_start(s->src, s->dst, ev.time);
        } else {
            handler.on_detection_tick(ev.time);
        }
    }

    Topology topology_;
    RadioModel radio_;
    Rng rng_;
    Seconds now_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t processed_ = 0;
    std::priority_queue<Event<PacketT>, std::vector<Event<PacketT>>, Later> queue_;
};

} // namespace meshwatch::sim
