#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "meshwatch/sim/engine.hpp"

using namespace meshwatch::sim;

namespace {

struct TestPacket {
    int id = 0;
};

struct Recorder : EventHandler<TestPacket> {
    std::ostringstream log;

    void on_delivery(const TestPacket& p, NodeId receiver, Seconds t) override {
        log << "d(" << p.id << "->" << receiver << "@" << t << ")";
    }
    void on_timer(NodeId owner, std::uint64_t key, Seconds t) override {
        log << "t(" << owner << "," << key << "@" << t << ")";
    }
    void on_session_start(NodeId src, NodeId dst, Seconds t) override {
        log << "s(" << src << "->" << dst << "@" << t << ")";
    }
    void on_detection_tick(Seconds t) override { log << "k(@" << t << ")"; }
};

Topology line3(double spacing, double range) {
    return make_topology({{0, 0}, {spacing, 0}, {2 * spacing, 0}}, range);
}

} // namespace

TEST_CASE("equal-time events run in schedule order") {
    Engine<TestPacket> eng(line3(10, 15), RadioModel{}, 1);
    Recorder rec;
    eng.schedule_timer(5.0, 0, 1);
    eng.schedule_timer(5.0, 0, 2);
    eng.schedule_timer(2.0, 0, 3);
    eng.run_until(10.0, rec);
    CHECK(rec.log.str() == "t(0,3@2)t(0,1@5)t(0,2@5)");
    CHECK(eng.now() == 10.0);
}

TEST_CASE("scheduling into the past is rejected") {
    Engine<TestPacket> eng(line3(10, 15), RadioModel{}, 1);
    Recorder rec;
    eng.schedule_timer(4.0, 0, 1);
    eng.run_until(4.0, rec);
    CHECK_THROWS_AS(eng.schedule_timer(3.0, 0, 2), PastEventError);
    // scheduling at exactly now is allowed
    CHECK_NOTHROW(eng.schedule_timer(4.0, 0, 3));
}

TEST_CASE("empty queue still advances the clock") {
    Engine<TestPacket> eng(line3(10, 15), RadioModel{}, 1);
    Recorder rec;
    eng.run_until(123.0, rec);
    CHECK(eng.now() == 123.0);
    CHECK(eng.processed_count() == 0);
}

TEST_CASE("ideal channel delivers to every neighbor exactly once") {
    // node 1 has neighbors 0 and 2; node 0 only 1
    Engine<TestPacket> eng(line3(10, 15), RadioModel{0.0, 0.001, 0.005}, 1);
    Recorder rec;
    eng.transmit(1, TestPacket{7}, 0.0);
    eng.run_until(1.0, rec);
    std::string s = rec.log.str();
    CHECK(eng.processed_count() == 2);
    CHECK(s.find("7->0") != std::string::npos);
    CHECK(s.find("7->2") != std::string::npos);
}

TEST_CASE("total loss delivers nothing") {
    Engine<TestPacket> eng(line3(10, 15), RadioModel{1.0, 0.001, 0.005}, 1);
    Recorder rec;
    eng.transmit(1, TestPacket{7}, 0.0);
    eng.run_until(1.0, rec);
    CHECK(eng.processed_count() == 0);
}

TEST_CASE("lossy delivery counts reproduce under the same seed") {
    auto run_once = [] {
        Engine<TestPacket> eng(make_topology({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 1}}, 5.0),
                               RadioModel{0.5, 0.001, 0.005}, 99);
        Recorder rec;
        for (int i = 0; i < 20; ++i) eng.transmit(0, TestPacket{i}, 0.0);
        eng.run_until(1.0, rec);
        return rec.log.str();
    };
    std::string first = run_once();
    REQUIRE(first == run_once());
    CHECK(!first.empty());
}

TEST_CASE("jitter stays within the configured bounds") {
    Engine<TestPacket> eng(line3(10, 15), RadioModel{0.0, 0.002, 0.004}, 3);
    struct Check : EventHandler<TestPacket> {
        void on_delivery(const TestPacket&, NodeId, Seconds t) override {
            REQUIRE(t >= 5.002);
            REQUIRE(t < 5.004);
        }
        void on_timer(NodeId, std::uint64_t, Seconds) override {}
        void on_session_start(NodeId, NodeId, Seconds) override {}
        void on_detection_tick(Seconds) override {}
    } rec;
    for (int i = 0; i < 50; ++i) eng.transmit(1, TestPacket{i}, 5.0);
    eng.run_until(6.0, rec);
}
