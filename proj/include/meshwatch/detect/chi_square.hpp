#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "meshwatch/numerics/special_functions.hpp"
#include "meshwatch/watchdog/watchdog.hpp"

namespace meshwatch::detect {

using watchdog::kNumStates;

struct ChiSquareResult {
    double statistic = 0.0;
    bool rejected = false;
};

/// Pearson two-sample homogeneity statistic for one FSM row of two
/// neighbors' transition matrices. Expected counts pool the two rows in
/// proportion to the row totals; columns with zero combined count
/// contribute nothing, and two empty rows give statistic 0.
inline double chi_square_row_statistic(std::span<const std::uint32_t> row_r,
                                       std::span<const std::uint32_t> row_s) {
    double total_r = 0.0;
    double total_s = 0.0;
    for (std::size_t j = 0; j < row_r.size(); ++j) {
        total_r += row_r[j];
        total_s += row_s[j];
    }
    double total = total_r + total_s;
    if (total == 0.0) return 0.0;
    double stat = 0.0;
    for (std::size_t j = 0; j < row_r.size(); ++j) {
        double col = static_cast<double>(row_r[j]) + static_cast<double>(row_s[j]);
        if (col == 0.0) continue;
        double exp_r = total_r * col / total;
        double exp_s = total_s * col / total;
        if (exp_r > 0.0) stat += (row_r[j] - exp_r) * (row_r[j] - exp_r) / exp_r;
        if (exp_s > 0.0) stat += (row_s[j] - exp_s) * (row_s[j] - exp_s) / exp_s;
    }
    return stat;
}

/// Row test against a precomputed chi-squared critical value.
inline ChiSquareResult chi_square_row_with_critical(std::span<const std::uint32_t> row_r,
                                                    std::span<const std::uint32_t> row_s,
                                                    double critical) {
    double stat = chi_square_row_statistic(row_r, row_s);
    return {stat, stat > critical};
}

/// Row test at significance alpha, df fixed at m - 1 = 7.
inline ChiSquareResult chi_square_row(std::span<const std::uint32_t> row_r,
                                      std::span<const std::uint32_t> row_s, double alpha) {
    double critical = numerics::chi2_critical(kNumStates - 1, alpha);
    return chi_square_row_with_critical(row_r, row_s, critical);
}

} // namespace meshwatch::detect
