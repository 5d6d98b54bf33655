#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "meshwatch/aodv/node.hpp"

using namespace meshwatch::aodv;

namespace {

struct StubServices : NodeServices {
    std::vector<Packet> sent;
    std::vector<double> draws;
    std::size_t next_draw = 0;

    void send(const Packet& p) override { sent.push_back(p); }
    double policy_draw() override {
        REQUIRE(next_draw < draws.size());
        return draws[next_draw++];
    }
};

NodeConfig test_cfg() { return NodeConfig{30, 0.5, 10.0}; }

Rreq make_rreq(NodeId src, NodeId dst, std::uint32_t bcast, NodeId transmitter, NodeId nts,
               int ttl = 30) {
    Rreq q;
    q.src_id = src;
    q.dest_id = dst;
    q.src_seq = 1;
    q.dest_seq = 0;
    q.bcast_id = bcast;
    q.ttl = ttl;
    q.next_to_source = nts;
    q.duplicate_flag = false;
    q.transmitter = transmitter;
    return q;
}

} // namespace

TEST_CASE("decide_drop truth table") {
    CHECK_FALSE(decide_drop({PolicyKind::Cooperative, 1.0}, PacketKind::Rreq, 0.0));
    CHECK_FALSE(decide_drop({PolicyKind::Cooperative, 1.0}, PacketKind::Rrep, 0.0));
    CHECK_FALSE(decide_drop({PolicyKind::DropReq, 1.0}, PacketKind::Rrep, 0.0));
    CHECK_FALSE(decide_drop({PolicyKind::DropRep, 1.0}, PacketKind::Rreq, 0.0));
    CHECK(decide_drop({PolicyKind::DropRep, 0.1}, PacketKind::Rrep, 0.05));
    CHECK_FALSE(decide_drop({PolicyKind::DropRep, 0.1}, PacketKind::Rrep, 0.5));
    CHECK(decide_drop({PolicyKind::DropReq, 0.7}, PacketKind::Rreq, 0.69));
}

TEST_CASE("originate_discovery floods once and respects the cache") {
    Node node(1, {}, test_cfg());
    StubServices svc;

    node.originate_discovery(5, 0.0, svc);
    REQUIRE(svc.sent.size() == 1);
    const auto& q1 = std::get<Rreq>(svc.sent[0]);
    CHECK(q1.src_id == 1);
    CHECK(q1.dest_id == 5);
    CHECK(q1.bcast_id == 1);
    CHECK(q1.next_to_source == 1);
    CHECK_FALSE(q1.duplicate_flag);
    CHECK(q1.ttl == 30);

    // a second discovery without a route uses a fresh bcast id
    node.originate_discovery(5, 1.0, svc);
    REQUIRE(svc.sent.size() == 2);
    CHECK(std::get<Rreq>(svc.sent[1]).bcast_id == 2);

    // install a route by receiving an RREP, then no flood
    Rrep rep;
    rep.src_id = 1;
    rep.dest_id = 5;
    rep.dest_seq = 3;
    rep.receiver = 1;
    rep.transmitter = 2;
    node.handle_rrep(rep, 2.0, svc);
    REQUIRE(node.has_valid_route(5, 2.5));
    node.originate_discovery(5, 2.5, svc);
    CHECK(svc.sent.size() == 2);

    // the cache entry expires after active_route_timeout
    CHECK_FALSE(node.has_valid_route(5, 12.5));
    node.originate_discovery(5, 12.5, svc);
    CHECK(svc.sent.size() == 3);
}

TEST_CASE("destination answers a RREQ with a reverse-path RREP") {
    Node node(5, {}, test_cfg());
    StubServices svc;
    node.handle_rreq(make_rreq(1, 5, 1, /*transmitter=*/4, /*nts=*/3), 0.0, svc);
    REQUIRE(svc.sent.size() == 1);
    const auto& rep = std::get<Rrep>(svc.sent[0]);
    CHECK(rep.src_id == 1);
    CHECK(rep.dest_id == 5);
    CHECK(rep.receiver == 4);
    CHECK(rep.next_to_destination == 3); // the transmitter's own predecessor
    CHECK(rep.hop_count == 0);
    CHECK(rep.transmitter == 5);
}

TEST_CASE("duplicate floods are suppressed") {
    Node node(2, {}, test_cfg());
    StubServices svc;
    node.handle_rreq(make_rreq(1, 5, 1, 1, 1), 0.0, svc);
    REQUIRE(svc.sent.size() == 1); // forwarded once
    node.handle_rreq(make_rreq(1, 5, 1, 3, 1), 0.01, svc);
    CHECK(svc.sent.size() == 1); // second copy ignored
    const auto& fwd = std::get<Rreq>(svc.sent[0]);
    CHECK(fwd.transmitter == 2);
    CHECK(fwd.ttl == 29);
    CHECK(fwd.next_to_source == 1);
    CHECK_FALSE(fwd.duplicate_flag);
}

TEST_CASE("ttl exhaustion ends forwarding silently") {
    Node node(2, {}, test_cfg());
    StubServices svc;
    node.handle_rreq(make_rreq(1, 5, 1, 1, 1, /*ttl=*/0), 0.0, svc);
    CHECK(svc.sent.empty());
}

TEST_CASE("a DropReq node with certain drop never rebroadcasts but still replies as destination") {
    Node node(2, {PolicyKind::DropReq, 1.0}, test_cfg());
    StubServices svc;
    svc.draws = {0.3, 0.9};
    node.handle_rreq(make_rreq(1, 5, 1, 1, 1), 0.0, svc);
    CHECK(svc.sent.empty());
    CHECK(node.dropped_rreq() == 1);
    node.handle_rreq(make_rreq(1, 5, 2, 1, 1), 1.0, svc);
    CHECK(node.dropped_rreq() == 2);

    // destined to itself: always answered, no draw consumed
    node.handle_rreq(make_rreq(1, 2, 3, 1, 1), 2.0, svc);
    REQUIRE(svc.sent.size() == 1);
    CHECK(std::get<Rrep>(svc.sent[0]).dest_id == 2);
    CHECK(svc.next_draw == 2);
}

TEST_CASE("intermediate node with a fresh cached route replies instead of forwarding") {
    Node node(2, {}, test_cfg());
    StubServices svc;

    // seed the cache: node learns a route to 5 with seq 4
    Rrep install;
    install.src_id = 2;
    install.dest_id = 5;
    install.dest_seq = 4;
    install.receiver = 2;
    install.transmitter = 3;
    node.handle_rrep(install, 0.0, svc);

    node.handle_rreq(make_rreq(1, 5, 1, 7, 7, 30), 1.0, svc);
    REQUIRE(svc.sent.size() == 1);
    const auto& rep = std::get<Rrep>(svc.sent[0]);
    CHECK(rep.dest_seq == 4);
    CHECK(rep.receiver == 7);

    // a stale cache entry (dest_seq below the request's) does not answer
    Rreq fresh = make_rreq(1, 5, 2, 7, 7, 30);
    fresh.dest_seq = 9;
    node.handle_rreq(fresh, 1.5, svc);
    REQUIRE(svc.sent.size() == 2);
    CHECK(is_rreq(svc.sent[1]));
}

TEST_CASE("a DropRep node rebroadcasts even with a valid cached route") {
    Node node(2, {PolicyKind::DropRep, 1.0}, test_cfg());
    StubServices svc;
    svc.draws = {0.0};

    Rrep install;
    install.src_id = 2;
    install.dest_id = 5;
    install.dest_seq = 4;
    install.receiver = 2;
    install.transmitter = 3;
    node.handle_rrep(install, 0.0, svc);
    REQUIRE(node.has_valid_route(5, 1.0));

    node.handle_rreq(make_rreq(1, 5, 1, 7, 7, 30), 1.0, svc);
    REQUIRE(svc.sent.size() == 1);
    CHECK(is_rreq(svc.sent[0])); // rebroadcast, not a cache reply
}

TEST_CASE("intermediate node forwards an RREP along the reverse path") {
    Node node(2, {}, test_cfg());
    StubServices svc;
    // reverse state: first copy of the flood came from 1, whose own
    // predecessor is the source 0
    node.handle_rreq(make_rreq(0, 5, 1, 1, 0), 0.0, svc);
    REQUIRE(svc.sent.size() == 1);

    Rrep rep;
    rep.src_id = 0;
    rep.dest_id = 5;
    rep.dest_seq = 2;
    rep.hop_count = 1;
    rep.receiver = 2;
    rep.next_to_destination = 1;
    rep.transmitter = 3;
    node.handle_rrep(rep, 0.1, svc);
    REQUIRE(svc.sent.size() == 2);
    const auto& fwd = std::get<Rrep>(svc.sent[1]);
    CHECK(fwd.receiver == 1);
    CHECK(fwd.next_to_destination == 0);
    CHECK(fwd.hop_count == 2);
    CHECK(fwd.transmitter == 2);
    CHECK(node.has_valid_route(5, 0.2));
}

TEST_CASE("an RREP after the reverse entry expired is an orphan") {
    Node node(2, {}, test_cfg());
    StubServices svc;
    node.handle_rreq(make_rreq(0, 5, 1, 1, 0), 0.0, svc);

    Rrep rep;
    rep.src_id = 0;
    rep.dest_id = 5;
    rep.receiver = 2;
    rep.transmitter = 3;
    node.handle_rrep(rep, 0.9, svc); // reverse entry died at t = 0.5
    CHECK(node.orphan_rrep() == 1);
    CHECK(svc.sent.size() == 1); // nothing forwarded

    // with no reverse state at all the result is the same
    Rrep stray;
    stray.src_id = 9;
    stray.dest_id = 5;
    stray.receiver = 2;
    stray.transmitter = 3;
    node.handle_rrep(stray, 0.95, svc);
    CHECK(node.orphan_rrep() == 2);
}

TEST_CASE("a DropRep node with certain drop never forwards RREPs") {
    Node node(2, {PolicyKind::DropRep, 1.0}, test_cfg());
    StubServices svc;
    svc.draws = {0.5};
    node.handle_rreq(make_rreq(0, 5, 1, 1, 0), 0.0, svc);
    REQUIRE(svc.sent.size() == 1);

    Rrep rep;
    rep.src_id = 0;
    rep.dest_id = 5;
    rep.receiver = 2;
    rep.transmitter = 3;
    node.handle_rrep(rep, 0.1, svc);
    CHECK(svc.sent.size() == 1);
    CHECK(node.dropped_rrep() == 1);
}

TEST_CASE("the discovery source completes instead of forwarding") {
    Node node(0, {}, test_cfg());
    StubServices svc;
    Rrep rep;
    rep.src_id = 0;
    rep.dest_id = 5;
    rep.dest_seq = 2;
    rep.receiver = 0;
    rep.transmitter = 1;
    node.handle_rrep(rep, 0.1, svc);
    CHECK(svc.sent.empty());
    CHECK(node.completed_discoveries() == 1);
    CHECK(node.has_valid_route(5, 0.2));
}
