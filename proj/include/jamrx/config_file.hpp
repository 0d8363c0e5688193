#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jamrx/csv.hpp"
#include "jamrx/montecarlo.hpp"

namespace jamrx {

enum class ScenarioKind {
    sweep_m,
    sweep_jam_both,
    sweep_jam_pilot,
    sweep_power_ratio,
    power_alloc,
    delta_nmse,
    validate,
};

inline std::optional<ScenarioKind> scenario_from_name(const std::string& name) {
    if (name == "sweep-m") return ScenarioKind::sweep_m;
    if (name == "sweep-jam-both") return ScenarioKind::sweep_jam_both;
    if (name == "sweep-jam-pilot") return ScenarioKind::sweep_jam_pilot;
    if (name == "sweep-power-ratio") return ScenarioKind::sweep_power_ratio;
    if (name == "power-alloc") return ScenarioKind::power_alloc;
    if (name == "delta-nmse") return ScenarioKind::delta_nmse;
    if (name == "validate") return ScenarioKind::validate;
    return std::nullopt;
}

inline const char* scenario_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::sweep_m: return "sweep-m";
        case ScenarioKind::sweep_jam_both: return "sweep-jam-both";
        case ScenarioKind::sweep_jam_pilot: return "sweep-jam-pilot";
        case ScenarioKind::sweep_power_ratio: return "sweep-power-ratio";
        case ScenarioKind::power_alloc: return "power-alloc";
        case ScenarioKind::delta_nmse: return "delta-nmse";
        case ScenarioKind::validate: return "validate";
    }
    return "?";
}

/// "mrc" | "zf" | "mmse" | "rzf:<mu>"
inline ReceiverSpec parse_receiver(const std::string& text) {
    if (text == "mrc") return {ReceiverKind::mrc, 0.0};
    if (text == "zf") return {ReceiverKind::zf, 0.0};
    if (text == "mmse") return {ReceiverKind::mmse, 0.0};
    if (text.rfind("rzf:", 0) == 0) {
        try {
            const double mu = std::stod(text.substr(4));
            if (mu >= 0.0) return {ReceiverKind::rzf, mu};
        } catch (const std::exception&) {
        }
        throw ConfigError("invalid rzf regularization in '" + text + "'");
    }
    throw ConfigError("unknown receiver '" + text + "' (expected mrc|zf|mmse|rzf:<mu>)");
}

/// Everything a scenario run needs. Defaults are scenario-specific and are
/// filled by default_request(); the config file and command line override.
struct ScenarioRequest {
    ScenarioKind kind = ScenarioKind::sweep_m;
    SystemConfig config;
    MonteCarloPlan plan;
    std::vector<int> m_list;
    std::vector<double> snr_db_list;
    std::vector<double> jam_db_list;
    std::vector<double> ratio_db_list;
    std::vector<double> pu_db_list;
    std::vector<ReceiverSpec> receivers;
    double p_avg = 1.0;
    int used_index = 0;
    int unused_index = 1;
    std::string out_csv = "results.csv";
    std::string out_svg;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Scenario defaults: block structure T = 200, tau = 3, unit fading and
/// noise; 5 dB transmit powers where the sweep does not set them itself.
/// Monte Carlo budgets are desk scale, far below the 10^4 jamming draws used
/// for the published curves; raise --sj-draws/--trials to reproduce those.
inline ScenarioRequest default_request(ScenarioKind kind) {
    ScenarioRequest req;
    req.kind = kind;
    req.config = SystemConfig{};
    const double five_db = db_to_linear(5.0);
    req.config.p_u = req.config.q_u = req.config.p_j = req.config.q_j = five_db;
    req.p_avg = five_db;
    req.plan.seed = 12345;
    switch (kind) {
        case ScenarioKind::sweep_m:
            req.m_list = {50, 100, 200, 300, 400, 500};
            req.snr_db_list = {0.0, 5.0, 10.0};
            req.receivers = {{ReceiverKind::mrc, 0.0}, {ReceiverKind::mmse, 0.0},
                             {ReceiverKind::zf, 0.0}};
            req.plan.n_sj_draws = 400;
            req.plan.n_trials_per_sj = 1500;
            req.out_csv = "sweep_m.csv";
            break;
        case ScenarioKind::sweep_jam_both:
        case ScenarioKind::sweep_jam_pilot:
            req.jam_db_list = {-20, -15, -10, -5, 0, 5, 10, 15, 20, 25, 30, 35, 40};
            req.receivers = {{ReceiverKind::mrc, 0.0}, {ReceiverKind::mmse, 0.0},
                             {ReceiverKind::zf, 0.0}};
            req.plan.n_sj_draws = 300;
            req.plan.n_trials_per_sj = 1200;
            req.out_csv = kind == ScenarioKind::sweep_jam_both ? "sweep_jam_both.csv"
                                                               : "sweep_jam_pilot.csv";
            break;
        case ScenarioKind::sweep_power_ratio:
            req.ratio_db_list = {-10, -7.5, -5, -2.5, 0, 2.5, 5, 7.5, 10, 12.5, 15, 17.5, 20,
                                 22.5, 25, 27.5, 30};
            req.receivers = {{ReceiverKind::mmse, 0.0}, {ReceiverKind::zf, 0.0}};
            req.plan.n_sj_draws = 300;
            req.plan.n_trials_per_sj = 1000;
            req.out_csv = "sweep_power_ratio.csv";
            break;
        case ScenarioKind::power_alloc:
            req.m_list = {50, 100, 200, 400};
            req.receivers = {{ReceiverKind::zf, 0.0}};
            req.plan.n_sj_draws = 250;
            req.plan.n_trials_per_sj = 1000;
            req.out_csv = "power_alloc.csv";
            break;
        case ScenarioKind::delta_nmse:
            req.m_list = {50, 100, 200, 500};
            req.pu_db_list = {0.0, 5.0, 10.0};
            req.receivers = {{ReceiverKind::zf, 0.0}};
            req.plan.n_sj_draws = 1000;  // estimation runs per antenna count
            req.plan.n_trials_per_sj = 1000;
            req.out_csv = "delta_nmse.csv";
            break;
        case ScenarioKind::validate:
            req.m_list = {32, 64, 128, 256, 512};
            req.receivers = {{ReceiverKind::zf, 0.0}, {ReceiverKind::mmse, 0.0}};
            req.plan.n_sj_draws = 1;
            req.plan.n_trials_per_sj = 10000;
            req.out_csv = "validate.csv";
            break;
    }
    return req;
}

namespace detail {

template <typename T>
T parse_number(const std::string& value, int line, const std::string& key) {
    std::istringstream in(value);
    T out;
    in >> out;
    if (in.fail() || !(in >> std::ws).eof()) {
        throw ConfigError("line " + std::to_string(line) + ": invalid value '" + value +
                          "' for key '" + key + "'");
    }
    return out;
}

template <typename T>
std::vector<T> parse_list(std::string value, int line, const std::string& key) {
    for (char& ch : value) {
        if (ch == ',') ch = ' ';
    }
    std::istringstream in(value);
    std::vector<T> out;
    T item;
    while (in >> item) {
        out.push_back(item);
    }
    if (out.empty() || !(in >> std::ws).eof()) {
        throw ConfigError("line " + std::to_string(line) + ": invalid list for key '" + key + "'");
    }
    return out;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Flat `key = value` format, '#' comments, keys matching the scenario and
/// model field names. A `name` key (scanned first, wherever it appears)
/// selects the scenario and seeds its defaults; every other key then
/// overrides in file order. When `require_name` is set (the file is the only
/// scenario source) a missing `name` key is an error; when `expected_kind`
/// is set (scenario given on the command line) a conflicting `name` is one.
inline void apply_config_file(const std::string& path, ScenarioRequest& req,
                              bool require_name = false,
                              std::optional<ScenarioKind> expected_kind = std::nullopt) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file: " + path);
    }
    struct Entry {
        int line;
        std::string key;
        std::string value;
    };
    std::vector<Entry> entries;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string stripped =
            detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" +
                              stripped + "'");
        }
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        }
        entries.push_back({lineno, key, value});
    }

    bool saw_name = false;
    for (const Entry& e : entries) {
        if (e.key != "name") continue;
        const auto kind = scenario_from_name(e.value);
        if (!kind) {
            throw ConfigError("line " + std::to_string(e.line) + ": unknown scenario '" + e.value +
                              "'");
        }
        if (expected_kind && *expected_kind != *kind) {
            throw ConfigError(path + " names scenario '" + e.value +
                              "' but the command line selected '" + scenario_name(*expected_kind) +
                              "'");
        }
        if (saw_name) {
            throw ConfigError("line " + std::to_string(e.line) + ": duplicate 'name' key");
        }
        req = default_request(*kind);
        saw_name = true;
    }
    if (require_name && !saw_name) {
        throw ConfigError(path + ": missing required key 'name'");
    }

    for (const Entry& entry : entries) {
        const int line = entry.line;
        const std::string& key = entry.key;
        const std::string& value = entry.value;
        if (key == "name") {
            continue;
        } else if (key == "m") {
            req.config.m = detail::parse_number<int>(value, line, key);
        } else if (key == "t_coh") {
            req.config.t_coh = detail::parse_number<int>(value, line, key);
        } else if (key == "tau") {
            req.config.tau = detail::parse_number<int>(value, line, key);
        } else if (key == "beta_u") {
            req.config.beta_u = detail::parse_number<double>(value, line, key);
        } else if (key == "beta_j") {
            req.config.beta_j = detail::parse_number<double>(value, line, key);
        } else if (key == "sigma2") {
            req.config.sigma2 = detail::parse_number<double>(value, line, key);
        } else if (key == "p_u") {
            req.config.p_u = detail::parse_number<double>(value, line, key);
        } else if (key == "q_u") {
            req.config.q_u = detail::parse_number<double>(value, line, key);
        } else if (key == "p_j") {
            req.config.p_j = detail::parse_number<double>(value, line, key);
        } else if (key == "q_j") {
            req.config.q_j = detail::parse_number<double>(value, line, key);
        } else if (key == "n_sj_draws") {
            req.plan.n_sj_draws = detail::parse_number<int>(value, line, key);
        } else if (key == "n_trials_per_sj") {
            req.plan.n_trials_per_sj = detail::parse_number<int>(value, line, key);
        } else if (key == "seed") {
            req.plan.seed = detail::parse_number<std::uint64_t>(value, line, key);
        } else if (key == "worker_hint") {
            req.plan.worker_hint = detail::parse_number<int>(value, line, key);
        } else if (key == "m_list") {
            req.m_list = detail::parse_list<int>(value, line, key);
        } else if (key == "snr_db_list") {
            req.snr_db_list = detail::parse_list<double>(value, line, key);
        } else if (key == "jam_db_list") {
            req.jam_db_list = detail::parse_list<double>(value, line, key);
        } else if (key == "ratio_db_list") {
            req.ratio_db_list = detail::parse_list<double>(value, line, key);
        } else if (key == "pu_db_list") {
            req.pu_db_list = detail::parse_list<double>(value, line, key);
        } else if (key == "receiver") {
            req.receivers.clear();
            for (const std::string& r : detail::parse_list<std::string>(value, line, key)) {
                req.receivers.push_back(parse_receiver(r));
            }
        } else if (key == "p_avg_db") {
            req.p_avg = db_to_linear(detail::parse_number<double>(value, line, key));
        } else if (key == "used_index") {
            req.used_index = detail::parse_number<int>(value, line, key);
        } else if (key == "unused_index") {
            req.unused_index = detail::parse_number<int>(value, line, key);
        } else if (key == "out" || key == "output_path") {
            req.out_csv = value;
        } else if (key == "svg") {
            req.out_svg = value;
        } else {
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }
    const auto errors = validate_config(req.config);
    if (!errors.empty()) {
        std::string msg = path + ": invalid parameters:";
        for (const auto& e : errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
}

/// File-only entry point: the file must name its scenario.
inline ScenarioRequest parse_config(const std::string& path) {
    ScenarioRequest req = default_request(ScenarioKind::sweep_m);
    apply_config_file(path, req, /*require_name=*/true);
    return req;
}

}  // namespace jamrx
