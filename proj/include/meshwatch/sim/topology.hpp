#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "meshwatch/sim/rng.hpp"
#include "meshwatch/sim/types.hpp"

namespace meshwatch::sim {

struct ConnectivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Static unit-disk topology: u and v are neighbors iff their Euclidean
// distance is <= range. Adjacency lists are kept sorted by node id.
struct Topology {
    std::vector<std::array<double, 2>> positions;
    double range = 0.0;
    std::vector<std::vector<NodeId>> adjacency;

    std::size_t size() const { return positions.size(); }

    const std::vector<NodeId>& neighbors(NodeId u) const { return adjacency[u]; }

    bool adjacent(NodeId u, NodeId v) const {
        const auto& nb = adjacency[u];
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    void rebuild_adjacency() {
        const std::size_t n = positions.size();
        adjacency.assign(n, {});
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = u + 1; v < n; ++v) {
                double dx = positions[u][0] - positions[v][0];
                double dy = positions[u][1] - positions[v][1];
                if (std::hypot(dx, dy) <= range) {
                    adjacency[u].push_back(static_cast<NodeId>(v));
                    adjacency[v].push_back(static_cast<NodeId>(u));
                }
            }
        }
    }

    bool connected() const {
        const std::size_t n = positions.size();
        if (n == 0) return true;
        std::vector<char> seen(n, 0);
        std::vector<NodeId> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : adjacency[u]) {
                if (!seen[v]) {
                    seen[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        return count == n;
    }
};

/// Build a topology from a fixed list of positions (test scenarios).
inline Topology make_topology(std::vector<std::array<double, 2>> positions, double range) {
    Topology topo;
    topo.positions = std::move(positions);
    topo.range = range;
    topo.rebuild_adjacency();
    return topo;
}

/// Place n nodes uniformly at random in a width x height area. Disconnected
/// placements are resampled with the next derived seed, up to 100 attempts.
inline Topology build_topology(std::size_t n, double width, double height, double range,
                               std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("build_topology: need at least 2 nodes");
    if (range <= 0.0) throw std::invalid_argument("build_topology: range must be positive");
    for (int attempt = 0; attempt < 100; ++attempt) {
        Rng rng(derive_seed(seed, 0x746f706fULL + static_cast<std::uint64_t>(attempt)));
        Topology topo;
        topo.range = range;
        topo.positions.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double x = rng.uniform(0.0, width);
            double y = rng.uniform(0.0, height);
            topo.positions.push_back({x, y});
        }
        topo.rebuild_adjacency();
        if (topo.connected()) return topo;
    }
    throw ConnectivityError("build_topology: no connected placement in 100 attempts (n=" +
                            std::to_string(n) + ", range=" + std::to_string(range) + ")");
}

} // namespace meshwatch::sim
