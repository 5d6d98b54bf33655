#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "meshwatch/detect/similarity.hpp"

namespace meshwatch::detect {

// Single-linkage agglomerative clustering. Clusters are identified by their
// smallest leaf index; ties on distance break toward the lexicographically
// smallest (rep_a, rep_b) pair, rep_a < rep_b. Merge heights are
// non-decreasing by the single-linkage property.

struct Merge {
    std::size_t rep_a = 0; // smallest leaf of the first cluster
    std::size_t rep_b = 0; // smallest leaf of the second cluster
    double height = 0.0;
};

struct Dendrogram {
    std::size_t n_leaves = 0;
    std::vector<Merge> merges; // exactly n_leaves - 1 entries
};

inline Dendrogram single_linkage(const DissimilarityMatrix& d) {
    const std::size_t n = d.size();
    if (n < 2) throw std::invalid_argument("single_linkage: need at least 2 points");

    // Lance-Williams update on a shrinking distance matrix:
    // dist(a+b, c) = min(dist(a,c), dist(b,c)).
    std::vector<std::vector<double>> dist = d.values;
    std::vector<std::size_t> rep(n);
    std::vector<bool> active(n, true);
    for (std::size_t i = 0; i < n; ++i) rep[i] = i;

    Dendrogram out;
    out.n_leaves = n;
    out.merges.reserve(n - 1);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        std::size_t best_j = 0;
        bool found = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                std::size_t ra = std::min(rep[i], rep[j]);
                std::size_t rb = std::max(rep[i], rep[j]);
                bool better = false;
                if (dist[i][j] < best) {
                    better = true;
                } else if (dist[i][j] == best && found) {
                    std::size_t cur_a = std::min(rep[best_i], rep[best_j]);
                    std::size_t cur_b = std::max(rep[best_i], rep[best_j]);
                    better = ra < cur_a || (ra == cur_a && rb < cur_b);
                }
                if (better || !found) {
                    best = dist[i][j];
                    best_i = i;
                    best_j = j;
                    found = true;
                }
            }
        }
        std::size_t keep = best_i;
        std::size_t drop = best_j;
        out.merges.push_back({std::min(rep[keep], rep[drop]),
                              std::max(rep[keep], rep[drop]), best});
        rep[keep] = std::min(rep[keep], rep[drop]);
        active[drop] = false;
        for (std::size_t c = 0; c < n; ++c) {
            if (!active[c] || c == keep) continue;
            dist[keep][c] = dist[c][keep] = std::min(dist[keep][c], dist[drop][c]);
        }
    }
    return out;
}

/// Undo the last k-1 merges: the partition into k clusters. Clusters are
/// ordered by smallest leaf; members are sorted.
inline std::vector<std::vector<std::size_t>> cut(const Dendrogram& dendro, std::size_t k) {
    const std::size_t n = dendro.n_leaves;
    if (k < 1 || k > n) throw std::invalid_argument("cut: k out of range");

    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    for (std::size_t m = 0; m + k < n; ++m) {
        std::size_t a = find(dendro.merges[m].rep_a);
        std::size_t b = find(dendro.merges[m].rep_b);
        // union by smallest leaf so roots stay canonical
        std::size_t root = std::min(a, b);
        parent[a] = root;
        parent[b] = root;
    }

    std::vector<std::vector<std::size_t>> clusters;
    std::vector<long> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<long>(clusters.size());
            clusters.emplace_back();
        }
        clusters[static_cast<std::size_t>(slot[r])].push_back(i);
    }
    return clusters;
}

} // namespace meshwatch::detect
