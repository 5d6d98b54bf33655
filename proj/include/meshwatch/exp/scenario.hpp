#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "meshwatch/aodv/node.hpp"
#include "meshwatch/detect/classify.hpp"
#include "meshwatch/exp/config.hpp"
#include "meshwatch/sim/engine.hpp"
#include "meshwatch/sim/topology.hpp"
#include "meshwatch/watchdog/watchdog.hpp"

// One simulation run: topology, AODV nodes with behavior policies, a
// watchdog per node, Poisson session traffic, and periodic detection ticks
// where every monitor classifies its neighbors and the per-monitor verdicts
// are aggregated into global labels by majority vote.

namespace meshwatch::expctl {

using aodv::NodeId;
using aodv::Packet;
using sim::Seconds;

struct TickNodeRow {
    NodeId node = 0;
    bool true_selfish = false;
    detect::Label global_label = detect::Label::Cooperative;
    std::uint32_t n_monitors = 0;
    std::uint32_t selfish_votes = 0;
    std::uint32_t total_evidence = 0;
};

struct TickVerdicts {
    Seconds t = 0.0;
    std::vector<TickNodeRow> rows;
};

struct RunMetrics {
    double detection_rate = 1.0;       // TP over true selfish nodes with >= 1 monitor
    double false_positive_rate = 0.0;  // FP over true cooperative nodes with >= 1 monitor
    std::vector<TickVerdicts> per_tick_verdicts;
};

struct Session {
    Seconds t = 0.0;
    NodeId src = 0;
    NodeId dst = 0;
    double duration = 0.0;
};

struct TransmissionLogEntry {
    Seconds t = 0.0;
    Packet packet;
};

struct DeliveryLogEntry {
    Seconds t = 0.0;
    NodeId receiver = 0;
    Packet packet;
};

class Scenario : public sim::EventHandler<Packet> {
  public:
    explicit Scenario(const ScenarioConfig& cfg)
        : Scenario(cfg,
                   sim::build_topology(cfg.n_nodes, cfg.area_width, cfg.area_height, cfg.range,
                                       sim::derive_seed(cfg.seed, kTopologyStream))) {}

    Scenario(const ScenarioConfig& cfg, sim::Topology topology)
        : Scenario(cfg, std::move(topology), {}, false) {}

    Scenario(const ScenarioConfig& cfg, sim::Topology topology, std::vector<Session> sessions)
        : Scenario(cfg, std::move(topology), std::move(sessions), true) {}

    void enable_delivery_log(bool on) { log_deliveries_ = on; }
    void enable_watchdog_trace(bool on) {
        for (auto& wd : watchdogs_) wd.enable_trace(on);
    }

    void run() {
        if (ran_) return;
        ran_ = true;
        for (const auto& s : sessions_) engine_.schedule_session(s.t, s.src, s.dst);
        for (Seconds t = cfg_.D_s; t <= cfg_.duration_s + 1e-9; t += cfg_.W_s)
            engine_.schedule_detection_tick(t);
        engine_.run_until(cfg_.duration_s, *this);
        // flush machines whose deadlines fall past the horizon so whole-run
        // evidence accounting is complete
        Seconds flush = cfg_.duration_s + cfg_.rreq_timeout_s + cfg_.rrep_timeout_s + 1.0;
        for (auto& wd : watchdogs_) wd.advance_to(flush);
        compute_metrics();
    }

    const ScenarioConfig& config() const { return cfg_; }
    const sim::Topology& topology() const { return engine_.topology(); }
    const RunMetrics& metrics() const { return metrics_; }
    const std::vector<Session>& sessions() const { return sessions_; }
    const std::vector<TransmissionLogEntry>& transmissions() const { return transmissions_; }
    const std::vector<DeliveryLogEntry>& deliveries() const { return deliveries_; }
    const aodv::Node& node(NodeId id) const { return nodes_[id]; }
    watchdog::Watchdog& watchdog_of(NodeId id) { return watchdogs_[id]; }
    bool is_selfish(NodeId id) const { return selfish_[id]; }

    std::size_t n_nodes() const { return nodes_.size(); }

    /// Whole-run direct evidence accrued against `node` across all monitors.
    std::uint32_t total_evidence_against(NodeId node) const {
        std::uint32_t total = 0;
        for (NodeId m : topology().neighbors(node))
            total += watchdogs_[m].evidence_total(node).total();
        return total;
    }

    // EventHandler
    void on_delivery(const Packet& packet, NodeId receiver, Seconds t) override {
        if (log_deliveries_) deliveries_.push_back({t, receiver, packet});
        watchdogs_[receiver].observe(packet, t);
        if (const auto* rreq = std::get_if<aodv::Rreq>(&packet)) {
            nodes_[receiver].handle_rreq(*rreq, t, *services_[receiver]);
        } else {
            nodes_[receiver].handle_rrep(std::get<aodv::Rrep>(packet), t, *services_[receiver]);
        }
    }

    void on_timer(NodeId owner, std::uint64_t key, Seconds t) override {
        auto it = pending_sends_.find(key);
        if (it == pending_sends_.end()) return;
        Packet packet = std::move(it->second);
        pending_sends_.erase(it);
        transmissions_.push_back({t, packet});
        watchdogs_[owner].observe(packet, t); // a node hears its own transmissions
        engine_.transmit(owner, packet, t);
    }

    void on_session_start(NodeId src, NodeId dst, Seconds t) override {
        // only one active discovery per (src, dst): space repeats by the
        // RREP timeout
        auto it = next_discovery_.find({src, dst});
        if (it != next_discovery_.end() && t < it->second) {
            engine_.schedule_session(it->second, src, dst);
            return;
        }
        next_discovery_[{src, dst}] = t + cfg_.rrep_timeout_s;
        nodes_[src].originate_discovery(dst, t, *services_[src]);
    }

    void on_detection_tick(Seconds t) override {
        const std::size_t n = nodes_.size();
        detect::ClassifyParams cparams{cfg_.alpha, cfg_.beta, cfg_.k_max, cfg_.coop_threshold};
        detect::FuseParams fparams{cfg_.e_min, cfg_.e_strong};

        std::vector<std::map<NodeId, detect::Verdict>> fused(n);
        std::vector<std::map<NodeId, watchdog::EvidenceCounters>> windowed_evidence(n);
        for (std::size_t m = 0; m < n; ++m) {
            auto snap = watchdogs_[m].snapshot(t, cfg_.D_s);
            auto cluster_verdicts = detect::classify(snap, cparams);
            std::map<NodeId, watchdog::EvidenceCounters> evidence;
            for (const auto& [nb, s] : snap) evidence[nb] = s.evidence;
            fused[m] = detect::fuse(cluster_verdicts, evidence, fparams);
            windowed_evidence[m] = std::move(evidence);
        }

        TickVerdicts tick;
        tick.t = t;
        tick.rows.reserve(n);
        for (NodeId x = 0; x < n; ++x) {
            TickNodeRow row;
            row.node = x;
            row.true_selfish = selfish_[x];
            const auto& monitors = topology().neighbors(x);
            row.n_monitors = static_cast<std::uint32_t>(monitors.size());
            for (NodeId m : monitors) {
                auto it = fused[m].find(x);
                if (it != fused[m].end() && it->second.label == detect::Label::Selfish)
                    ++row.selfish_votes;
                auto ev = windowed_evidence[m].find(x);
                if (ev != windowed_evidence[m].end()) row.total_evidence += ev->second.total();
            }
            bool global_selfish =
                row.n_monitors > 0 &&
                static_cast<double>(row.selfish_votes) >=
                    cfg_.vote_quorum * static_cast<double>(row.n_monitors);
            row.global_label = global_selfish ? detect::Label::Selfish : detect::Label::Cooperative;
            tick.rows.push_back(row);
        }
        metrics_.per_tick_verdicts.push_back(std::move(tick));
    }

  private:
    static constexpr std::uint64_t kTopologyStream = 0x746f706fULL; // also used by build_topology
    static constexpr std::uint64_t kEngineStream = 0x656e6769ULL;
    static constexpr std::uint64_t kTrafficStream = 0x74726166ULL;
    static constexpr std::uint64_t kSelfishStream = 0x73656c66ULL;
    static constexpr std::uint64_t kPolicyStream = 0x706f6c69ULL;

    class Services : public aodv::NodeServices {
      public:
        Services(Scenario* owner, NodeId id, std::uint64_t policy_seed)
            : owner_(owner), id_(id), policy_rng_(policy_seed) {}
        void send(const Packet& packet) override { owner_->enqueue_send(id_, packet); }
        double policy_draw() override { return policy_rng_.uniform01(); }

      private:
        Scenario* owner_;
        NodeId id_;
        sim::Rng policy_rng_;
    };

    Scenario(const ScenarioConfig& cfg, sim::Topology topology, std::vector<Session> sessions,
             bool sessions_injected)
        : cfg_(cfg),
          engine_(std::move(topology),
                  sim::RadioModel{cfg.loss_probability, cfg.jitter_min_s, cfg.jitter_max_s},
                  sim::derive_seed(cfg.seed, kEngineStream)),
          sessions_(std::move(sessions)) {
        validate(cfg_);
        const std::size_t n = engine_.topology().size();

        selfish_.assign(n, false);
        std::size_t n_selfish = static_cast<std::size_t>(
            std::ceil(cfg_.selfish_fraction * static_cast<double>(n)));
        if (n_selfish > 0) {
            sim::Rng rng(sim::derive_seed(cfg_.seed, kSelfishStream));
            std::vector<NodeId> ids(n);
            for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<NodeId>(i);
            for (std::size_t i = 0; i < n_selfish && i < n; ++i) {
                std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(n - i));
                std::swap(ids[i], ids[j]);
                selfish_[ids[i]] = true;
            }
        }

        nodes_.reserve(n);
        watchdogs_.reserve(n);
        services_.reserve(n);
        aodv::NodeConfig ncfg{cfg_.ttl, cfg_.rreq_timeout_s, cfg_.active_route_timeout_s};
        for (std::size_t i = 0; i < n; ++i) {
            aodv::BehaviorPolicy policy;
            if (selfish_[i]) policy = {cfg_.strategy, cfg_.drop_probability};
            nodes_.emplace_back(static_cast<NodeId>(i), policy, ncfg);
            watchdogs_.emplace_back(static_cast<NodeId>(i), engine_.topology().neighbors(i),
                                    cfg_.rreq_timeout_s, cfg_.rrep_timeout_s);
            services_.push_back(std::make_unique<Services>(
                this, static_cast<NodeId>(i),
                sim::derive_seed(cfg_.seed, kPolicyStream ^ (0x10000ULL + i))));
        }

        if (!sessions_injected) generate_sessions();
    }

    void generate_sessions() {
        const std::size_t n = engine_.topology().size();
        sim::Rng rng(sim::derive_seed(cfg_.seed, kTrafficStream));
        Seconds t = 0.0;
        while (true) {
            t += rng.exponential(1.0 / cfg_.session_rate_per_s);
            if (t > cfg_.duration_s) break;
            NodeId src = static_cast<NodeId>(rng.uniform_int(n));
            NodeId dst = static_cast<NodeId>(rng.uniform_int(n - 1));
            if (dst >= src) ++dst;
            double duration = rng.exponential(cfg_.session_duration_mean_s);
            sessions_.push_back({t, src, dst, duration});
        }
    }

    void enqueue_send(NodeId owner, const Packet& packet) {
        std::uint64_t key = next_send_key_++;
        pending_sends_.emplace(key, packet);
        engine_.schedule_timer(engine_.now(), owner, key);
    }

    void compute_metrics() {
        std::size_t n = nodes_.size();
        std::size_t selfish_denom = 0;
        std::size_t coop_denom = 0;
        std::size_t tp = 0;
        std::size_t fp = 0;
        const TickVerdicts* last =
            metrics_.per_tick_verdicts.empty() ? nullptr : &metrics_.per_tick_verdicts.back();
        for (NodeId x = 0; x < n; ++x) {
            if (topology().neighbors(x).empty()) continue;
            bool labeled_selfish = false;
            if (last) labeled_selfish = last->rows[x].global_label == detect::Label::Selfish;
            if (selfish_[x]) {
                ++selfish_denom;
                if (labeled_selfish) ++tp;
            } else {
                ++coop_denom;
                if (labeled_selfish) ++fp;
            }
        }
        metrics_.detection_rate =
            selfish_denom == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(selfish_denom);
        metrics_.false_positive_rate =
            coop_denom == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(coop_denom);
    }

    ScenarioConfig cfg_;
    sim::Engine<Packet> engine_;
    std::vector<Session> sessions_;
    std::vector<aodv::Node> nodes_;
    std::vector<watchdog::Watchdog> watchdogs_;
    std::vector<std::unique_ptr<Services>> services_;
    std::vector<bool> selfish_;
    std::map<std::pair<NodeId, NodeId>, Seconds> next_discovery_;
    std::map<std::uint64_t, Packet> pending_sends_;
    std::uint64_t next_send_key_ = 0;
    std::vector<TransmissionLogEntry> transmissions_;
    std::vector<DeliveryLogEntry> deliveries_;
    bool log_deliveries_ = false;
    bool ran_ = false;
    RunMetrics metrics_;
};

/// Run one configured scenario end to end.
inline RunMetrics run_scenario(const ScenarioConfig& cfg) {
    Scenario scenario(cfg);
    scenario.run();
    return scenario.metrics();
}

} // namespace meshwatch::expctl
