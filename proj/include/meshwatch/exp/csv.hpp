#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "meshwatch/exp/scenario.hpp"
#include "meshwatch/exp/sweep.hpp"

namespace meshwatch::expctl {

/// Numbers are written with 6 significant digits so reruns are byte-identical.
inline std::string fmt_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
    out << "strategy,drop_prob,runs,detection_rate_mean,detection_rate_se,fpr_mean,fpr_se\n";
    for (const auto& r : rows) {
        out << strategy_name(r.strategy) << ',' << fmt_g6(r.drop_prob) << ',' << r.runs << ','
            << fmt_g6(r.detection_rate_mean) << ',' << fmt_g6(r.detection_rate_se) << ','
            << fmt_g6(r.fpr_mean) << ',' << fmt_g6(r.fpr_se) << '\n';
    }
}

inline void write_verdicts_csv(const RunMetrics& metrics, std::uint64_t seed, std::ostream& out) {
    out << "seed,tick_time_s,node_id,true_label,global_label,n_monitors,n_selfish_votes,"
           "total_evidence\n";
    for (const auto& tick : metrics.per_tick_verdicts) {
        for (const auto& row : tick.rows) {
            out << seed << ',' << fmt_g6(tick.t) << ',' << row.node << ','
                << (row.true_selfish ? "selfish" : "cooperative") << ','
                << detect::label_name(row.global_label) << ',' << row.n_monitors << ','
                << row.selfish_votes << ',' << row.total_evidence << '\n';
        }
    }
}

inline void emit_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    write_summary_csv(rows, out);
    if (!out) throw IoError("write failed for '" + path + "'");
}

inline void emit_csv(const RunMetrics& metrics, std::uint64_t seed, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    write_verdicts_csv(metrics, seed, out);
    if (!out) throw IoError("write failed for '" + path + "'");
}

/// One (x = drop_prob, y = mean, yerr = se) series per (strategy, metric),
/// preserving the sweep's row order. Returns the written file paths.
inline std::vector<std::string> plotdata(const std::vector<SummaryRow>& rows,
                                         const std::string& outdir) {
    std::vector<std::string> written;
    for (aodv::PolicyKind strategy : {aodv::PolicyKind::DropReq, aodv::PolicyKind::DropRep}) {
        for (int metric = 0; metric < 2; ++metric) {
            bool any = false;
            for (const auto& r : rows) any = any || r.strategy == strategy;
            if (!any) continue;
            std::string name = std::string(metric == 0 ? "detection_rate" : "fpr") + "_" +
                               strategy_name(strategy) + ".csv";
            std::string path = outdir + "/" + name;
            std::ofstream out(path, std::ios::binary);
            if (!out) throw IoError("cannot write '" + path + "'");
            out << "drop_prob,mean,se\n";
            for (const auto& r : rows) {
                if (r.strategy != strategy) continue;
                if (metric == 0) {
                    out << fmt_g6(r.drop_prob) << ',' << fmt_g6(r.detection_rate_mean) << ','
                        << fmt_g6(r.detection_rate_se) << '\n';
                } else {
                    out << fmt_g6(r.drop_prob) << ',' << fmt_g6(r.fpr_mean) << ','
                        << fmt_g6(r.fpr_se) << '\n';
                }
            }
            written.push_back(path);
        }
    }
    return written;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

} // namespace detail

/// Read back a summary CSV written by emit_csv.
inline std::vector<SummaryRow> load_summary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty summary file '" + path + "'");
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != 7) throw IoError("malformed summary row: '" + line + "'");
        SummaryRow r;
        r.strategy = parse_strategy(fields[0]);
        r.drop_prob = std::stod(fields[1]);
        r.runs = std::stoi(fields[2]);
        r.detection_rate_mean = std::stod(fields[3]);
        r.detection_rate_se = std::stod(fields[4]);
        r.fpr_mean = std::stod(fields[5]);
        r.fpr_se = std::stod(fields[6]);
        rows.push_back(r);
    }
    return rows;
}

/// Watchdog transition trace: time, monitor, neighbor, lmu_key, from, to.
inline void write_trace(const std::vector<watchdog::TransitionTraceEntry>& entries,
                        std::ostream& out) {
    for (const auto& e : entries) {
        out << fmt_g6(e.t) << ' ' << e.monitor << ' ' << e.neighbor << ' ' << e.key.src << ':'
            << e.key.dst << ':' << e.key.bcast << ' ' << static_cast<int>(e.from) << ' '
            << static_cast<int>(e.to) << '\n';
    }
}

} // namespace meshwatch::expctl
