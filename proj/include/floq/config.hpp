#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "floq/lattice.hpp"

namespace floq {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Experiment configuration, parsed from a UTF-8 "key = value" document
// ('#' starts a comment). Angles are given as multiples of pi. See the
// README for the full schema and defaults.
struct ExperimentConfig {
    std::string lattice;  // L19 | L28 | L156 | rows:R,cols:C[,offset:O] | prefix:SIZE:N | file:PATH
    double theta_xx_over_pi = 0.0;
    double theta_zz_over_pi = 0.0;
    double theta_z_over_pi = 0.0;
    double phi_max_over_pi = 0.0;
    std::uint64_t seed = 0;
    int n_cycles = 0;
    std::string backend;  // statevector | mps
    std::string output_dir;

    int chi = 256;
    double cutoff = 1e-10;
    bool allow_large_statevector = false;

    std::optional<double> noise_q;
    long noise_shots = 8192;
    std::uint64_t noise_seed = 0;

    std::string subset = "all";
    int neighborhood_k = 4;
    int window_first = 20;
    int window_last = 25;
    std::string variant = "both";  // exact | proxy | both
    std::vector<int> entropy_subsystem;
    std::vector<int> snapshot_steps;

    double theta_xx() const { return theta_xx_over_pi * kPi; }
    double theta_zz() const { return theta_zz_over_pi * kPi; }
    double theta_z() const { return theta_z_over_pi * kPi; }
    double phi_max() const { return phi_max_over_pi * kPi; }

    static constexpr double kPi = 3.14159265358979323846;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

inline std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        const auto dash = token.find('-', 1);  // allow ranges like 3-7
        if (dash != std::string::npos) {
            const int first = std::stoi(token.substr(0, dash));
            const int last = std::stoi(token.substr(dash + 1));
            if (last < first) throw ConfigError("descending range '" + token + "'");
            for (int v = first; v <= last; ++v) out.push_back(v);
        } else {
            out.push_back(std::stoi(token));
        }
    }
    return out;
}

}  // namespace detail

// Site subset selector: "all" or a comma list of indices and ranges.
inline std::vector<int> resolve_subset(const std::string& spec, int num_sites) {
    if (spec == "all" || spec.empty()) {
        std::vector<int> all(num_sites);
        for (int j = 0; j < num_sites; ++j) all[j] = j;
        return all;
    }
    auto subset = detail::parse_int_list(spec);
    for (int j : subset) {
        if (j < 0 || j >= num_sites) {
            throw ConfigError("subset site " + std::to_string(j) + " outside 0.." +
                              std::to_string(num_sites - 1));
        }
    }
    if (subset.empty()) throw ConfigError("subset '" + spec + "' selects no sites");
    return subset;
}

// Build the lattice a config names.
inline LatticeGraph build_lattice(const std::string& spec) {
    if (spec == "L19" || spec == "L28" || spec == "L156" || spec == "l19" || spec == "l28" ||
        spec == "l156") {
        return build_heavy_hex(parse_heavy_hex_size(spec));
    }
    if (spec.rfind("rows:", 0) == 0) {
        int rows = 0, cols = 0, offset = 3;
        std::string body = spec.substr(5);
        std::istringstream in(body);
        std::string token;
        rows = std::stoi(body);
        while (std::getline(in, token, ',')) {
            const auto colon = token.find(':');
            if (colon == std::string::npos) continue;
            const std::string key = detail::trim(token.substr(0, colon));
            const int value = std::stoi(token.substr(colon + 1));
            if (key == "rows") rows = value;
            else if (key == "cols") cols = value;
            else if (key == "offset") offset = value;
            else throw ConfigError("unknown lattice parameter '" + key + "'");
        }
        if (cols == 0) throw ConfigError("lattice spec '" + spec + "' is missing cols");
        return build_heavy_hex_rows(rows, cols, offset);
    }
    if (spec.rfind("prefix:", 0) == 0) {
        const std::string body = spec.substr(7);
        const auto colon = body.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("prefix lattice spec must look like prefix:L156:46");
        }
        const LatticeGraph base = build_heavy_hex(parse_heavy_hex_size(body.substr(0, colon)));
        const int count = std::stoi(body.substr(colon + 1));
        if (count < 2 || count > base.num_sites) {
            throw ConfigError("prefix site count must be in 2.." + std::to_string(base.num_sites));
        }
        std::vector<int> sites(count);
        for (int j = 0; j < count; ++j) sites[j] = j;
        return induced_subgraph(base, sites);
    }
    if (spec.rfind("file:", 0) == 0) {
        const std::string path = spec.substr(5);
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open edge list file '" + path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        return load_edge_list(text.str());
    }
    throw ConfigError("unrecognized lattice spec '" + spec +
                      "' (expected L19 | L28 | L156 | rows:R,cols:C[,offset:O] | prefix:SIZE:N | "
                      "file:PATH)");
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + " is not 'key = value'");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + " has an empty key");
        if (!kv.emplace(key, value).second) {
            throw ConfigError("config key '" + key + "' appears twice");
        }
    }

    static const std::vector<std::string> required = {
        "lattice",         "theta_xx_over_pi", "theta_zz_over_pi", "theta_z_over_pi",
        "phi_max_over_pi", "seed",             "n_cycles",         "backend",
        "output_dir"};
    static const std::vector<std::string> optional = {
        "chi",        "cutoff",      "allow_large_statevector",
        "noise_q",    "noise_shots", "noise_seed",
        "subset",     "neighborhood_k", "window",
        "variant",    "entropy_subsystem", "snapshot_steps"};

    std::vector<std::string> missing;
    for (const auto& key : required) {
        if (!kv.count(key)) missing.push_back(key);
    }
    if (!missing.empty()) {
        std::string msg = "config is missing required keys:";
        for (const auto& key : missing) msg += " " + key;
        throw ConfigError(msg);
    }
    std::vector<std::string> unknown;
    for (const auto& [key, value] : kv) {
        const bool known = std::count(required.begin(), required.end(), key) ||
                           std::count(optional.begin(), optional.end(), key);
        if (!known) unknown.push_back(key);
    }
    if (!unknown.empty()) {
        std::string msg = "config has unknown keys:";
        for (const auto& key : unknown) msg += " " + key;
        throw ConfigError(msg);
    }

    ExperimentConfig cfg;
    try {
        cfg.lattice = kv.at("lattice");
        cfg.theta_xx_over_pi = std::stod(kv.at("theta_xx_over_pi"));
        cfg.theta_zz_over_pi = std::stod(kv.at("theta_zz_over_pi"));
        cfg.theta_z_over_pi = std::stod(kv.at("theta_z_over_pi"));
        cfg.phi_max_over_pi = std::stod(kv.at("phi_max_over_pi"));
        cfg.seed = std::stoull(kv.at("seed"));
        cfg.n_cycles = std::stoi(kv.at("n_cycles"));
        cfg.backend = kv.at("backend");
        cfg.output_dir = kv.at("output_dir");
        if (kv.count("chi")) cfg.chi = std::stoi(kv.at("chi"));
        if (kv.count("cutoff")) cfg.cutoff = std::stod(kv.at("cutoff"));
        if (kv.count("allow_large_statevector")) {
            const std::string v = kv.at("allow_large_statevector");
            if (v != "true" && v != "false") {
                throw ConfigError("allow_large_statevector must be true or false");
            }
            cfg.allow_large_statevector = (v == "true");
        }
        if (kv.count("noise_q")) cfg.noise_q = std::stod(kv.at("noise_q"));
        if (kv.count("noise_shots")) cfg.noise_shots = std::stol(kv.at("noise_shots"));
        if (kv.count("noise_seed")) cfg.noise_seed = std::stoull(kv.at("noise_seed"));
        if (kv.count("subset")) cfg.subset = kv.at("subset");
        if (kv.count("neighborhood_k")) cfg.neighborhood_k = std::stoi(kv.at("neighborhood_k"));
        if (kv.count("window")) {
            const std::string w = kv.at("window");
            const auto colon = w.find(':');
            if (colon == std::string::npos) throw ConfigError("window must look like 20:25");
            cfg.window_first = std::stoi(w.substr(0, colon));
            cfg.window_last = std::stoi(w.substr(colon + 1));
        }
        if (kv.count("variant")) cfg.variant = kv.at("variant");
        if (kv.count("entropy_subsystem")) {
            cfg.entropy_subsystem = detail::parse_int_list(kv.at("entropy_subsystem"));
        }
        if (kv.count("snapshot_steps")) {
            cfg.snapshot_steps = detail::parse_int_list(kv.at("snapshot_steps"));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config value parse failure: ") + e.what());
    }

    if (cfg.backend != "statevector" && cfg.backend != "mps") {
        throw ConfigError("backend must be 'statevector' or 'mps', got '" + cfg.backend + "'");
    }
    if (cfg.variant != "exact" && cfg.variant != "proxy" && cfg.variant != "both") {
        throw ConfigError("variant must be exact, proxy or both");
    }
    if (cfg.n_cycles < 0) throw ConfigError("n_cycles must be >= 0");
    if (cfg.phi_max_over_pi < 0 || cfg.phi_max_over_pi > 2.0) {
        throw ConfigError("phi_max_over_pi must be in [0, 2]");
    }
    if (cfg.chi < 1) throw ConfigError("chi must be >= 1");
    if (cfg.cutoff < 0) throw ConfigError("cutoff must be >= 0");
    if (cfg.noise_q && !(*cfg.noise_q > 0.0 && *cfg.noise_q <= 1.0)) {
        throw ConfigError("noise_q must be in (0, 1]");
    }
    if (cfg.noise_shots < 1) throw ConfigError("noise_shots must be >= 1");
    if (cfg.neighborhood_k < 0) throw ConfigError("neighborhood_k must be >= 0");
    if (cfg.window_first < 0 || cfg.window_last < cfg.window_first) {
        throw ConfigError("window must satisfy 0 <= first <= last");
    }
    if (cfg.output_dir.empty()) throw ConfigError("output_dir must not be empty");
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["lattice"] = cfg.lattice;
    j["theta_xx_over_pi"] = cfg.theta_xx_over_pi;
    j["theta_zz_over_pi"] = cfg.theta_zz_over_pi;
    j["theta_z_over_pi"] = cfg.theta_z_over_pi;
    j["phi_max_over_pi"] = cfg.phi_max_over_pi;
    j["seed"] = cfg.seed;
    j["n_cycles"] = cfg.n_cycles;
    j["backend"] = cfg.backend;
    j["output_dir"] = cfg.output_dir;
    j["chi"] = cfg.chi;
    j["cutoff"] = cfg.cutoff;
    j["allow_large_statevector"] = cfg.allow_large_statevector;
    if (cfg.noise_q) {
        j["noise_q"] = *cfg.noise_q;
        j["noise_shots"] = cfg.noise_shots;
        j["noise_seed"] = cfg.noise_seed;
    }
    j["subset"] = cfg.subset;
    j["neighborhood_k"] = cfg.neighborhood_k;
    j["window"] = std::to_string(cfg.window_first) + ":" + std::to_string(cfg.window_last);
    j["variant"] = cfg.variant;
    j["entropy_subsystem"] = cfg.entropy_subsystem;
    j["snapshot_steps"] = cfg.snapshot_steps;
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.lattice = j.at("lattice").get<std::string>();
    cfg.theta_xx_over_pi = j.at("theta_xx_over_pi").get<double>();
    cfg.theta_zz_over_pi = j.at("theta_zz_over_pi").get<double>();
    cfg.theta_z_over_pi = j.at("theta_z_over_pi").get<double>();
    cfg.phi_max_over_pi = j.at("phi_max_over_pi").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.n_cycles = j.at("n_cycles").get<int>();
    cfg.backend = j.at("backend").get<std::string>();
    cfg.output_dir = j.at("output_dir").get<std::string>();
    cfg.chi = j.at("chi").get<int>();
    cfg.cutoff = j.at("cutoff").get<double>();
    cfg.allow_large_statevector = j.at("allow_large_statevector").get<bool>();
    if (j.contains("noise_q")) {
        cfg.noise_q = j.at("noise_q").get<double>();
        cfg.noise_shots = j.at("noise_shots").get<long>();
        cfg.noise_seed = j.at("noise_seed").get<std::uint64_t>();
    }
    cfg.subset = j.at("subset").get<std::string>();
    cfg.neighborhood_k = j.at("neighborhood_k").get<int>();
    const std::string w = j.at("window").get<std::string>();
    cfg.window_first = std::stoi(w.substr(0, w.find(':')));
    cfg.window_last = std::stoi(w.substr(w.find(':') + 1));
    cfg.variant = j.at("variant").get<std::string>();
    cfg.entropy_subsystem = j.at("entropy_subsystem").get<std::vector<int>>();
    cfg.snapshot_steps = j.at("snapshot_steps").get<std::vector<int>>();
    return cfg;
}

}  // namespace floq
