// meshwatch command line: run one scenario, sweep drop probabilities over
// both selfish strategies, or turn a sweep summary into plot-ready series.

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meshwatch/meshwatch.hpp"

namespace {

using namespace meshwatch;

std::vector<double> parse_prob_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

expctl::ScenarioConfig load_with_overrides(const std::string& config_path, long long seed,
                                           const std::string& strategy, double drop_prob) {
    expctl::ScenarioConfig cfg = expctl::load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (!strategy.empty()) cfg.strategy = expctl::parse_strategy(strategy);
    if (drop_prob >= 0.0) cfg.drop_probability = drop_prob;
    expctl::validate(cfg);
    return cfg;
}

int cmd_run(const std::string& config_path, long long seed, const std::string& strategy,
            double drop_prob, const std::string& verdicts_path, const std::string& trace_path) {
    auto cfg = load_with_overrides(config_path, seed, strategy, drop_prob);
    expctl::Scenario scenario(cfg);
    if (!trace_path.empty()) scenario.enable_watchdog_trace(true);
    scenario.run();
    const auto& m = scenario.metrics();

    std::cout << "seed=" << cfg.seed << " strategy=" << expctl::strategy_name(cfg.strategy)
              << " drop_prob=" << expctl::fmt_g6(cfg.drop_probability)
              << " detection_rate=" << expctl::fmt_g6(m.detection_rate)
              << " false_positive_rate=" << expctl::fmt_g6(m.false_positive_rate) << "\n";

    if (!verdicts_path.empty()) {
        expctl::emit_csv(m, cfg.seed, verdicts_path);
        std::cout << "verdicts written to " << verdicts_path << "\n";
    }
    if (!trace_path.empty()) {
        std::vector<watchdog::TransitionTraceEntry> all;
        for (std::size_t i = 0; i < scenario.n_nodes(); ++i) {
            const auto& t = scenario.watchdog_of(static_cast<aodv::NodeId>(i)).trace();
            all.insert(all.end(), t.begin(), t.end());
        }
        std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
            return std::tie(a.t, a.monitor, a.neighbor) < std::tie(b.t, b.monitor, b.neighbor);
        });
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) throw expctl::IoError("cannot write '" + trace_path + "'");
        expctl::write_trace(all, out);
        std::cout << "trace written to " << trace_path << "\n";
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& probs_csv, int runs,
              const std::string& out_path) {
    expctl::ScenarioConfig base = expctl::load_config(config_path);
    std::vector<double> probs = parse_prob_list(probs_csv);
    auto rows = expctl::sweep(base, probs, runs);
    expctl::write_summary_csv(rows, std::cout);
    if (!out_path.empty()) {
        expctl::emit_csv(rows, out_path);
        std::cerr << "summary written to " << out_path << "\n";
    }
    return 0;
}

int cmd_plotdata(const std::string& input, const std::string& outdir) {
    auto rows = expctl::load_summary_csv(input);
    auto files = expctl::plotdata(rows, outdir);
    for (const auto& f : files) std::cout << f << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"selfish-node detection testbed for AODV mesh networks"};
    app.require_subcommand(1);

    std::string config_path;
    long long seed = -1;
    std::string strategy;
    double drop_prob = -1.0;
    std::string verdicts_path;
    std::string trace_path;

    auto* run = app.add_subcommand("run", "run one scenario");
    run->add_option("--config", config_path, "scenario config file")->required();
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("--strategy", strategy, "override strategy: dropreq or droprep");
    run->add_option("--drop-prob", drop_prob, "override drop probability");
    run->add_option("--verdicts", verdicts_path, "write per-tick verdict CSV here");
    run->add_option("--trace", trace_path, "write the watchdog transition trace here");

    std::string probs_csv = "1.0,0.9,0.8,0.7,0.6,0.5,0.4,0.3,0.2,0.1";
    int runs = 10;
    std::string out_path;
    auto* sweep = app.add_subcommand("sweep", "sweep drop probabilities over both strategies");
    sweep->add_option("--config", config_path, "scenario config file")->required();
    sweep->add_option("--drop-probs", probs_csv, "comma-separated drop probabilities");
    sweep->add_option("--runs", runs, "replications per point");
    sweep->add_option("--out", out_path, "write the summary CSV here");

    std::string input;
    std::string outdir = ".";
    auto* plot = app.add_subcommand("plotdata", "emit plot series from a sweep summary");
    plot->add_option("--input", input, "summary CSV from sweep")->required();
    plot->add_option("--outdir", outdir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run))
            return cmd_run(config_path, seed, strategy, drop_prob, verdicts_path, trace_path);
        if (app.got_subcommand(sweep)) return cmd_sweep(config_path, probs_csv, runs, out_path);
        return cmd_plotdata(input, outdir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
