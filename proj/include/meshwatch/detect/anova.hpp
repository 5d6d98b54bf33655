#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "meshwatch/numerics/special_functions.hpp"

namespace meshwatch::detect {

/// One-way ANOVA over the per-cluster cooperation scores: the upper-tail
/// probability of F = (SSB/(k-1)) / (SSW/(N-k)) under F(k-1, N-k).
/// Degenerate cases: N == k or SSB == 0 give 1.0; SSW == 0 with spread
/// between clusters gives 0.0.
inline double anova_p(const std::vector<std::vector<std::size_t>>& clusters,
                      const std::vector<double>& scores) {
    const std::size_t k = clusters.size();
    if (k < 2) throw std::invalid_argument("anova_p: need at least 2 clusters");

    std::size_t n_total = 0;
    double grand_sum = 0.0;
    for (const auto& cluster : clusters) {
        for (std::size_t idx : cluster) {
            if (idx >= scores.size()) throw std::invalid_argument("anova_p: score index out of range");
            grand_sum += scores[idx];
            ++n_total;
        }
    }
    if (n_total == 0) throw std::invalid_argument("anova_p: empty clustering");
    double grand_mean = grand_sum / static_cast<double>(n_total);

    double ssb = 0.0;
    double ssw = 0.0;
    for (const auto& cluster : clusters) {
        if (cluster.empty()) continue;
        double sum = 0.0;
        for (std::size_t idx : cluster) sum += scores[idx];
        double mean = sum / static_cast<double>(cluster.size());
        ssb += static_cast<double>(cluster.size()) * (mean - grand_mean) * (mean - grand_mean);
        for (std::size_t idx : cluster) ssw += (scores[idx] - mean) * (scores[idx] - mean);
    }

    // tolerances absorb rounding residue; scores live in [0,1]
    constexpr double kZero = 1e-12;
    if (n_total == k) return 1.0;
    if (ssb < kZero) return 1.0;
    if (ssw < kZero) return 0.0;

    int d1 = static_cast<int>(k) - 1;
    int d2 = static_cast<int>(n_total - k);
    double f = (ssb / d1) / (ssw / d2);
    return numerics::f_sf(f, d1, d2);
}

} // namespace meshwatch::detect
