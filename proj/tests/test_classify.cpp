#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "meshwatch/detect/classify.hpp"

using namespace meshwatch::detect;
using meshwatch::watchdog::EvidenceCounters;
using meshwatch::watchdog::FsmState;
using meshwatch::watchdog::TransitionMatrix;
using meshwatch::watchdog::Watchdog;

namespace {

using Snapshot = std::map<NodeId, Watchdog::NeighborSnapshot>;

TransitionMatrix forwarding_matrix(int lmus) {
    TransitionMatrix m;
    for (int i = 0; i < lmus; ++i) {
        ++m.at(FsmState::Init, FsmState::FwdRreq);
        ++m.at(FsmState::FwdRreq, FsmState::FwdRreq);
        ++m.at(FsmState::FwdRreq, FsmState::RcvdRrep);
        ++m.at(FsmState::RcvdRrep, FsmState::LmuComplete);
    }
    return m;
}

TransitionMatrix dropping_matrix(int lmus) {
    TransitionMatrix m;
    for (int i = 0; i < lmus; ++i) {
        ++m.at(FsmState::Init, FsmState::RcvdRreq);
        ++m.at(FsmState::RcvdRreq, FsmState::TimeoutRreq);
    }
    return m;
}

ClassifyParams params() { return ClassifyParams{0.1, 0.4, 5, 0.5}; }

} // namespace

TEST_CASE("two neighbors cannot be classified") {
    Snapshot snap;
    snap[1].matrix = forwarding_matrix(10);
    snap[2].matrix = dropping_matrix(10);
    auto verdicts = classify(snap, params());
    CHECK(verdicts.at(1).label == Label::Unascertained);
    CHECK(verdicts.at(2).label == Label::Unascertained);
}

TEST_CASE("a clear behavioral split separates selfish from cooperative") {
    Snapshot snap;
    for (NodeId nb : {1u, 2u, 3u}) snap[nb].matrix = forwarding_matrix(40);
    for (NodeId nb : {4u, 5u}) snap[nb].matrix = dropping_matrix(40);
    auto verdicts = classify(snap, params());
    CHECK(verdicts.at(1).label == Label::Cooperative);
    CHECK(verdicts.at(2).label == Label::Cooperative);
    CHECK(verdicts.at(3).label == Label::Cooperative);
    CHECK(verdicts.at(4).label == Label::Selfish);
    CHECK(verdicts.at(5).label == Label::Selfish);
    CHECK(verdicts.at(4).cooperation_score == 0.0);
    CHECK(verdicts.at(1).cooperation_score == 1.0);
    CHECK(verdicts.at(4).cluster_id != verdicts.at(1).cluster_id);
}

TEST_CASE("uniform behavior classifies everyone as cooperative") {
    Snapshot snap;
    for (NodeId nb = 1; nb <= 5; ++nb) snap[nb].matrix = forwarding_matrix(25);
    auto verdicts = classify(snap, params());
    for (const auto& [nb, v] : verdicts) CHECK(v.label == Label::Cooperative);
}

TEST_CASE("no observations at all stays harmless") {
    Snapshot snap;
    for (NodeId nb = 1; nb <= 4; ++nb) snap[nb] = {};
    auto verdicts = classify(snap, params());
    for (const auto& [nb, v] : verdicts) {
        CHECK(v.label == Label::Cooperative);
        CHECK(v.cooperation_score == 0.5);
    }
}

TEST_CASE("a low cluster that is not low enough is not called selfish") {
    Snapshot snap;
    for (NodeId nb : {1u, 2u, 3u}) snap[nb].matrix = forwarding_matrix(40);
    for (NodeId nb : {4u, 5u}) {
        // distinguishable rows but a cooperation index of 2/3 > 0.5
        TransitionMatrix m = dropping_matrix(10);
        auto extra = forwarding_matrix(20);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) m.counts[i][j] += extra.counts[i][j];
        snap[nb].matrix = m;
    }
    auto verdicts = classify(snap, params());
    CHECK(verdicts.at(4).label == Label::Unascertained);
    CHECK(verdicts.at(5).label == Label::Unascertained);
    CHECK(verdicts.at(1).label == Label::Cooperative);
}

TEST_CASE("classification is invariant under a relabeling of neighbors") {
    Snapshot snap;
    for (NodeId nb : {1u, 2u, 3u}) snap[nb].matrix = forwarding_matrix(40);
    for (NodeId nb : {4u, 5u}) snap[nb].matrix = dropping_matrix(40);
    auto base = classify(snap, params());

    Snapshot renamed;
    std::map<NodeId, NodeId> remap{{1, 70}, {2, 10}, {3, 55}, {4, 21}, {5, 99}};
    for (const auto& [nb, s] : snap) renamed[remap[nb]] = s;
    auto moved = classify(renamed, params());
    for (const auto& [nb, v] : base) {
        CHECK(moved.at(remap[nb]).label == v.label);
        CHECK(moved.at(remap[nb]).cooperation_score == v.cooperation_score);
    }
}

TEST_CASE("fuse applies the double-check rules") {
    Verdict cluster_selfish;
    cluster_selfish.label = Label::Selfish;
    Verdict cluster_coop;
    cluster_coop.label = Label::Cooperative;
    Verdict cluster_unknown;
    cluster_unknown.label = Label::Unascertained;
    FuseParams fp{1, 3};

    EvidenceCounters none;
    EvidenceCounters one;
    one.rreq_drop = 1;
    EvidenceCounters strong;
    strong.rreq_drop = 2;
    strong.rrep_drop = 1;

    // cluster verdict confirmed by any evidence
    CHECK(fuse_one(cluster_selfish, one, fp).label == Label::Selfish);
    // cluster verdict without evidence downgrades
    CHECK(fuse_one(cluster_selfish, none, fp).label == Label::Unascertained);
    // strong evidence overrides any cluster verdict
    CHECK(fuse_one(cluster_coop, strong, fp).label == Label::Selfish);
    CHECK(fuse_one(cluster_unknown, strong, fp).label == Label::Selfish);
    // cooperative with no evidence stays cooperative
    CHECK(fuse_one(cluster_coop, none, fp).label == Label::Cooperative);
    CHECK(fuse_one(cluster_coop, one, fp).label == Label::Cooperative);

    // a wider gap: evidence above zero but under e_min is not enough
    FuseParams wide{2, 5};
    CHECK(fuse_one(cluster_selfish, one, wide).label == Label::Unascertained);

    // the map-level wrapper lines up neighbors and defaults missing evidence
    std::map<NodeId, Verdict> cv{{7, cluster_selfish}, {8, cluster_coop}};
    std::map<NodeId, EvidenceCounters> ev{{7, one}};
    auto fused = fuse(cv, ev, fp);
    CHECK(fused.at(7).label == Label::Selfish);
    CHECK(fused.at(8).label == Label::Cooperative);
}
