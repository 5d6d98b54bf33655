#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "meshwatch/detect/anova.hpp"
#include "meshwatch/detect/cluster.hpp"
#include "meshwatch/detect/similarity.hpp"
#include "meshwatch/watchdog/watchdog.hpp"

namespace meshwatch::detect {

using watchdog::EvidenceCounters;
using watchdog::NodeId;

enum class Label { Cooperative, Selfish, Unascertained };

inline const char* label_name(Label l) {
    switch (l) {
    case Label::Cooperative: return "cooperative";
    case Label::Selfish: return "selfish";
    default: return "unascertained";
    }
}

struct Verdict {
    Label label = Label::Unascertained;
    int cluster_id = -1;
    double cooperation_score = 0.5;
    EvidenceCounters evidence;
};

struct ClassifyParams {
    double alpha = 0.1;          // Pearson row-test significance
    double beta = 0.4;           // ANOVA acceptance threshold
    int k_max = 5;               // largest split tried
    double coop_threshold = 0.5; // a selfish cluster must score below this
};

/// The clustering stage: pairwise similarity from the row tests,
/// profile-based dissimilarity, single-linkage dendrogram, then an
/// ANOVA-gated scan over k = 2..k_max splits of the cooperation scores.
/// The first split with p below beta is accepted: its lowest-scoring
/// cluster is selfish (if under coop_threshold), its highest cooperative,
/// the rest unascertained. A rising p for k > 2 or an exhausted scan means
/// the clusters carry no signal and everyone passes as cooperative.
/// Fewer than 3 neighbors cannot be compared at all: all unascertained.
inline std::map<NodeId, Verdict>
classify(const std::map<NodeId, watchdog::Watchdog::NeighborSnapshot>& snapshot,
         const ClassifyParams& params) {
    std::vector<NodeId> ids;
    std::vector<watchdog::TransitionMatrix> matrices;
    ids.reserve(snapshot.size());
    for (const auto& [nb, snap] : snapshot) {
        ids.push_back(nb);
        matrices.push_back(snap.matrix);
    }
    const std::size_t n = ids.size();

    std::map<NodeId, Verdict> out;
    std::vector<double> scores(n, 0.5);
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = watchdog::cooperation_index(matrices[i]);
        Verdict v;
        v.cooperation_score = scores[i];
        v.evidence = snapshot.at(ids[i]).evidence;
        out[ids[i]] = v;
    }
    if (n < 3) {
        for (auto& [nb, v] : out) v.label = Label::Unascertained;
        return out;
    }

    SimilarityMatrix sim = build_similarity(matrices, params.alpha);
    DissimilarityMatrix dis = build_dissimilarity(sim);
    Dendrogram dendro = single_linkage(dis);

    auto label_all = [&](Label l) {
        for (auto& [nb, v] : out) {
            v.label = l;
            v.cluster_id = 0;
        }
    };

    double prev_p = 0.0;
    const std::size_t k_cap = std::min<std::size_t>(params.k_max, n);
    for (std::size_t k = 2; k <= k_cap; ++k) {
        auto clusters = cut(dendro, k);
        double p = anova_p(clusters, scores);
        if (p < params.beta) {
            // accepted split: rank clusters by mean cooperation score
            std::vector<double> means(clusters.size(), 0.0);
            for (std::size_t c = 0; c < clusters.size(); ++c) {
                double sum = 0.0;
                for (std::size_t idx : clusters[c]) sum += scores[idx];
                means[c] = sum / static_cast<double>(clusters[c].size());
            }
            std::size_t lo = 0;
            std::size_t hi = 0;
            for (std::size_t c = 1; c < clusters.size(); ++c) {
                if (means[c] < means[lo]) lo = c;
                if (means[c] > means[hi]) hi = c;
            }
            for (std::size_t c = 0; c < clusters.size(); ++c) {
                Label l = Label::Unascertained;
                if (c == hi) l = Label::Cooperative;
                if (c == lo && c != hi && means[c] < params.coop_threshold)
                    l = Label::Selfish;
                for (std::size_t idx : clusters[c]) {
                    Verdict& v = out[ids[idx]];
                    v.label = l;
                    v.cluster_id = static_cast<int>(c);
                }
            }
            return out;
        }
        if (k > 2 && p > prev_p) {
            label_all(Label::Cooperative);
            return out;
        }
        prev_p = p;
    }
    label_all(Label::Cooperative);
    return out;
}

struct FuseParams {
    std::uint32_t e_min = 1;    // evidence needed to confirm a cluster verdict
    std::uint32_t e_strong = 3; // evidence sufficient on its own
};

/// Cross-check the cluster verdict against direct evidence: selfish needs
/// either the cluster verdict plus e_min pieces of evidence, or e_strong
/// pieces outright. A cluster-selfish verdict without enough evidence
/// downgrades to unascertained.
inline Verdict fuse_one(const Verdict& cluster_verdict, const EvidenceCounters& evidence,
                        const FuseParams& params) {
    Verdict v = cluster_verdict;
    v.evidence = evidence;
    std::uint32_t total = evidence.total();
    bool cluster_selfish = cluster_verdict.label == Label::Selfish;
    if ((cluster_selfish && total >= params.e_min) || total >= params.e_strong) {
        v.label = Label::Selfish;
    } else if (cluster_selfish) {
        v.label = Label::Unascertained;
    }
    return v;
}

inline std::map<NodeId, Verdict> fuse(const std::map<NodeId, Verdict>& cluster_verdicts,
                                      const std::map<NodeId, EvidenceCounters>& evidence,
                                      const FuseParams& params) {
    std::map<NodeId, Verdict> out;
    for (const auto& [nb, cv] : cluster_verdicts) {
        auto it = evidence.find(nb);
        EvidenceCounters ev = it == evidence.end() ? EvidenceCounters{} : it->second;
        out[nb] = fuse_one(cv, ev, params);
    }
    return out;
}

} // namespace meshwatch::detect
