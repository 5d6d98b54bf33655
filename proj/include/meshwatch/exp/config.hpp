#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "meshwatch/aodv/policy.hpp"

namespace meshwatch::expctl {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    // topology and run
    std::size_t n_nodes = 50;
    double area_width = 900.0;
    double area_height = 900.0;
    double range = 250.0;
    double duration_s = 1600.0;

    // misbehavior
    double selfish_fraction = 0.5;
    aodv::PolicyKind strategy = aodv::PolicyKind::DropReq;
    double drop_probability = 1.0;

    // detection
    double alpha = 0.1;
    double beta = 0.4;
    double W_s = 100.0; // observation window
    double D_s = 400.0; // detection window, an integer multiple of W_s
    double rreq_timeout_s = 0.5;
    double rrep_timeout_s = 3.0;
    int k_max = 5;
    double coop_threshold = 0.5;
    std::uint32_t e_min = 1;
    std::uint32_t e_strong = 3;
    double vote_quorum = 0.5;

    // traffic and channel
    double session_rate_per_s = 0.2;
    double session_duration_mean_s = 20.0;
    double loss_probability = 0.0;
    std::uint64_t seed = 1;

    // protocol constants; not part of the config-file grammar
    int ttl = 30;
    double active_route_timeout_s = 10.0;
    double jitter_min_s = 0.001;
    double jitter_max_s = 0.005;
};

inline const char* strategy_name(aodv::PolicyKind kind) {
    switch (kind) {
    case aodv::PolicyKind::DropReq: return "dropreq";
    case aodv::PolicyKind::DropRep: return "droprep";
    default: return "cooperative";
    }
}

inline aodv::PolicyKind parse_strategy(const std::string& s) {
    if (s == "dropreq") return aodv::PolicyKind::DropReq;
    if (s == "droprep") return aodv::PolicyKind::DropRep;
    throw ConfigError("unknown strategy '" + s + "' (expected dropreq or droprep)");
}

inline void validate(const ScenarioConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (cfg.n_nodes < 2) fail("n_nodes must be at least 2");
    if (cfg.area_width <= 0.0 || cfg.area_height <= 0.0) fail("area must be positive");
    if (cfg.range <= 0.0) fail("range must be positive");
    if (cfg.duration_s < 0.0) fail("duration_s must be non-negative");
    if (cfg.selfish_fraction < 0.0 || cfg.selfish_fraction > 1.0)
        fail("selfish_fraction must be in [0,1]");
    if (cfg.drop_probability < 0.0 || cfg.drop_probability > 1.0)
        fail("drop_probability must be in [0,1]");
    if (cfg.loss_probability < 0.0 || cfg.loss_probability > 1.0)
        fail("loss_probability must be in [0,1]");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail("alpha must be in (0,1)");
    if (!(cfg.beta > 0.0 && cfg.beta <= 1.0)) fail("beta must be in (0,1]");
    if (cfg.W_s <= 0.0) fail("W_s must be positive");
    double d = cfg.D_s / cfg.W_s;
    if (cfg.D_s <= 0.0 || std::fabs(d - std::round(d)) > 1e-9 || d < 1.0 - 1e-9)
        fail("D_s must be a positive integer multiple of W_s");
    if (cfg.rreq_timeout_s <= 0.0 || cfg.rrep_timeout_s <= 0.0) fail("timeouts must be positive");
    if (cfg.k_max < 2) fail("k_max must be at least 2");
    if (cfg.coop_threshold < 0.0 || cfg.coop_threshold > 1.0)
        fail("coop_threshold must be in [0,1]");
    if (cfg.e_min > cfg.e_strong) fail("e_min must not exceed e_strong");
    if (!(cfg.vote_quorum > 0.0 && cfg.vote_quorum <= 1.0)) fail("vote_quorum must be in (0,1]");
    if (cfg.session_rate_per_s <= 0.0) fail("session_rate_per_s must be positive");
    if (cfg.session_duration_mean_s <= 0.0) fail("session_duration_mean_s must be positive");
    if (cfg.jitter_min_s <= 0.0 || cfg.jitter_max_s < cfg.jitter_min_s)
        fail("jitter bounds invalid");
    if (cfg.ttl < 1) fail("ttl must be at least 1");
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
    }
    if (pos != value.size()) throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
    return v;
}

inline void apply_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "n_nodes") {
        cfg.n_nodes = static_cast<std::size_t>(parse_real(key, value));
    } else if (key == "area") {
        std::size_t comma = value.find(',');
        if (comma == std::string::npos)
            throw ConfigError("area must be 'width,height', got '" + value + "'");
        cfg.area_width = parse_real(key, trim(value.substr(0, comma)));
        cfg.area_height = parse_real(key, trim(value.substr(comma + 1)));
    } else if (key == "range") {
        cfg.range = parse_real(key, value);
    } else if (key == "duration_s") {
        cfg.duration_s = parse_real(key, value);
    } else if (key == "selfish_fraction") {
        cfg.selfish_fraction = parse_real(key, value);
    } else if (key == "strategy") {
        cfg.strategy = parse_strategy(value);
    } else if (key == "drop_probability") {
        cfg.drop_probability = parse_real(key, value);
    } else if (key == "alpha") {
        cfg.alpha = parse_real(key, value);
    } else if (key == "beta") {
        cfg.beta = parse_real(key, value);
    } else if (key == "W_s") {
        cfg.W_s = parse_real(key, value);
    } else if (key == "D_s") {
        cfg.D_s = parse_real(key, value);
    } else if (key == "rreq_timeout_s") {
        cfg.rreq_timeout_s = parse_real(key, value);
    } else if (key == "rrep_timeout_s") {
        cfg.rrep_timeout_s = parse_real(key, value);
    } else if (key == "session_rate_per_s") {
        cfg.session_rate_per_s = parse_real(key, value);
    } else if (key == "session_duration_mean_s") {
        cfg.session_duration_mean_s = parse_real(key, value);
    } else if (key == "loss_probability") {
        cfg.loss_probability = parse_real(key, value);
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_real(key, value));
    } else if (key == "k_max") {
        cfg.k_max = static_cast<int>(parse_real(key, value));
    } else if (key == "coop_threshold") {
        cfg.coop_threshold = parse_real(key, value);
    } else if (key == "e_min") {
        cfg.e_min = static_cast<std::uint32_t>(parse_real(key, value));
    } else if (key == "e_strong") {
        cfg.e_strong = static_cast<std::uint32_t>(parse_real(key, value));
    } else if (key == "vote_quorum") {
        cfg.vote_quorum = parse_real(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

} // namespace detail

/// Parse flat `key = value` lines. Blank lines and lines starting with '#'
/// are skipped; unknown keys are rejected.
inline ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = detail::trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trim(s.substr(0, eq));
        std::string value = detail::trim(s.substr(eq + 1));
        detail::apply_key(cfg, key, value);
    }
    validate(cfg);
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    return parse_config(in);
}

} // namespace meshwatch::expctl
