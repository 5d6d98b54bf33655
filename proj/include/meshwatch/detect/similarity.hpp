#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "meshwatch/detect/chi_square.hpp"
#include "meshwatch/watchdog/watchdog.hpp"

namespace meshwatch::detect {

using watchdog::TransitionMatrix;

struct InsufficientNeighborsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Similarity of two neighbors' behavior: alpha^S, where S is the number of
/// FSM rows whose Pearson test rejects equality of the outgoing-transition
/// distributions.
inline double similarity(const TransitionMatrix& t_r, const TransitionMatrix& t_s,
                         double alpha) {
    double critical = numerics::chi2_critical(kNumStates - 1, alpha);
    int rejections = 0;
    for (int i = 0; i < kNumStates; ++i) {
        auto row_r = t_r.row(i);
        auto row_s = t_s.row(i);
        if (chi_square_row_with_critical(row_r, row_s, critical).rejected) ++rejections;
    }
    return std::pow(alpha, rejections);
}

// R x R similarity matrix, diagonal 1.
struct SimilarityMatrix {
    std::vector<std::vector<double>> values;

    std::size_t size() const { return values.size(); }
    double at(std::size_t r, std::size_t s) const { return values[r][s]; }
};

inline SimilarityMatrix build_similarity(const std::vector<TransitionMatrix>& matrices,
                                         double alpha) {
    const std::size_t n = matrices.size();
    SimilarityMatrix sim;
    sim.values.assign(n, std::vector<double>(n, 1.0));
    double critical = numerics::chi2_critical(kNumStates - 1, alpha);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = r + 1; s < n; ++s) {
            int rejections = 0;
            for (int i = 0; i < kNumStates; ++i) {
                auto row_r = matrices[r].row(i);
                auto row_s = matrices[s].row(i);
                if (chi_square_row_with_critical(row_r, row_s, critical).rejected)
                    ++rejections;
            }
            double value = std::pow(alpha, rejections);
            sim.values[r][s] = value;
            sim.values[s][r] = value;
        }
    }
    return sim;
}

/// Robust dissimilarity between r and s: compares their similarity profiles
/// against every third node t, so a noisy pairwise value cannot dominate.
/// d = 1 - n_rs^2 / (n_r/s * n_s/r), in [0,1]; degenerate profiles give 1.
inline double dissimilarity(const SimilarityMatrix& sim, std::size_t r, std::size_t s) {
    const std::size_t n = sim.size();
    if (n < 3)
        throw InsufficientNeighborsError("dissimilarity: need at least 3 neighbors");
    double n_rs = 0.0;
    double n_r_s = 0.0;
    double n_s_r = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (t == r || t == s) continue;
        double lrt = sim.at(r, t);
        double lst = sim.at(s, t);
        n_rs += std::min(lrt, lst);
        n_r_s += lrt;
        n_s_r += lst;
    }
    double denom = n_r_s * n_s_r;
    if (denom == 0.0) return 1.0;
    return 1.0 - (n_rs * n_rs) / denom;
}

struct DissimilarityMatrix {
    std::vector<std::vector<double>> values;

    std::size_t size() const { return values.size(); }
    double at(std::size_t r, std::size_t s) const { return values[r][s]; }
};

inline DissimilarityMatrix build_dissimilarity(const SimilarityMatrix& sim) {
    const std::size_t n = sim.size();
    DissimilarityMatrix d;
    d.values.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = r + 1; s < n; ++s) {
            double v = dissimilarity(sim, r, s);
            d.values[r][s] = v;
            d.values[s][r] = v;
        }
    }
    return d;
}

} // namespace meshwatch::detect
