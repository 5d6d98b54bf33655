#pragma once

#include <cmath>
#include <vector>

#include "meshwatch/exp/scenario.hpp"

namespace meshwatch::expctl {

struct SummaryRow {
    aodv::PolicyKind strategy = aodv::PolicyKind::DropReq;
    double drop_prob = 0.0;
    int runs = 0;
    double detection_rate_mean = 0.0;
    double detection_rate_se = 0.0;
    double fpr_mean = 0.0;
    double fpr_se = 0.0;
};

namespace detail {

inline std::pair<double, double> mean_se(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    if (n == 0) return {0.0, 0.0};
    double sum = 0.0;
    for (double x : xs) sum += x;
    double mean = sum / static_cast<double>(n);
    if (n == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    double var = ss / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

} // namespace detail

/// For each (strategy, drop probability), run n_runs replications with
/// seeds base_seed + run index and report mean and standard error of the
/// detection and false-positive rates.
inline std::vector<SummaryRow> sweep(const ScenarioConfig& base, const std::vector<double>& drop_probs,
                                     int n_runs) {
    if (n_runs < 1) throw ConfigError("sweep: n_runs must be at least 1");
    std::vector<SummaryRow> rows;
    for (aodv::PolicyKind strategy : {aodv::PolicyKind::DropReq, aodv::PolicyKind::DropRep}) {
        for (double p : drop_probs) {
            std::vector<double> dr;
            std::vector<double> fpr;
            dr.reserve(n_runs);
            fpr.reserve(n_runs);
            for (int run = 0; run < n_runs; ++run) {
                ScenarioConfig cfg = base;
                cfg.strategy = strategy;
                cfg.drop_probability = p;
                cfg.seed = base.seed + static_cast<std::uint64_t>(run);
                RunMetrics m = run_scenario(cfg);
                dr.push_back(m.detection_rate);
                fpr.push_back(m.false_positive_rate);
            }
            auto [dm, dse] = detail::mean_se(dr);
            auto [fm, fse] = detail::mean_se(fpr);
            rows.push_back({strategy, p, n_runs, dm, dse, fm, fse});
        }
    }
    return rows;
}

} // namespace meshwatch::expctl
