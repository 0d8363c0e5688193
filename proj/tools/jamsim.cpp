// jamsim: link-level experiments for a single-user massive MIMO uplink under
// pilot- and data-phase jamming. Each subcommand reproduces one experiment
// family; results land in a CSV (fixed schema) and optionally an SVG chart.

#include <CLI11.hpp>
#include <iostream>

#include "jamrx/scenario.hpp"

namespace {

constexpr const char* kScenarioList =
    "sweep-m | sweep-jam-both | sweep-jam-pilot | sweep-power-ratio | power-alloc | "
    "delta-nmse | validate";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"massive MIMO uplink jamming simulator"};
    app.footer("scenarios: " + std::string(kScenarioList));

    std::string scenario;
    std::string config_path;
    std::vector<int> m_list;
    std::vector<double> snr_db_list;
    std::vector<double> jam_db_list;
    std::vector<double> ratio_db_list;
    std::vector<double> pu_db_list;
    std::vector<std::string> receivers;
    int sj_draws = -1;
    int trials = -1;
    std::int64_t seed = -1;
    int workers = -1;
    int m_override = -1;
    double p_avg_db = std::numeric_limits<double>::quiet_NaN();
    std::string out_csv;
    std::string out_svg;

    app.add_option("scenario", scenario, "scenario name (" + std::string(kScenarioList) + ")")
        ->required();
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--m-list", m_list, "antenna counts to sweep");
    app.add_option("--snr-db-list", snr_db_list, "SNR grid in dB (sweep-m)");
    app.add_option("--jam-db-list", jam_db_list, "jamming power grid in dB (jam sweeps)");
    app.add_option("--ratio-db-list", ratio_db_list, "p_u/q_u grid in dB (sweep-power-ratio)");
    app.add_option("--pu-db-list", pu_db_list, "user power grid in dB (delta-nmse)");
    app.add_option("--receiver", receivers, "receivers: mrc|zf|mmse|rzf:<mu> (repeatable)");
    app.add_option("--sj-draws", sj_draws, "jamming sequence draws per sweep point");
    app.add_option("--trials", trials, "Monte Carlo trials per jamming draw");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--workers", workers, "worker threads (0 = all cores)");
    app.add_option("--m", m_override, "antenna count for fixed-M scenarios");
    app.add_option("--p-avg-db", p_avg_db, "average power budget in dB (power scenarios)");
    app.add_option("--out", out_csv, "output CSV path");
    app.add_option("--svg", out_svg, "also write an SVG chart");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const auto kind = jamrx::scenario_from_name(scenario);
        if (!kind) {
            std::cerr << "error: unknown scenario '" << scenario << "'\n       expected one of: "
                      << kScenarioList << "\n";
            return 1;
        }
        jamrx::ScenarioRequest req = jamrx::default_request(*kind);
        if (!config_path.empty()) {
            jamrx::apply_config_file(config_path, req, /*require_name=*/false, *kind);
        }
        if (!m_list.empty()) req.m_list = m_list;
        if (!snr_db_list.empty()) req.snr_db_list = snr_db_list;
        if (!jam_db_list.empty()) req.jam_db_list = jam_db_list;
        if (!ratio_db_list.empty()) req.ratio_db_list = ratio_db_list;
        if (!pu_db_list.empty()) req.pu_db_list = pu_db_list;
        if (!receivers.empty()) {
            req.receivers.clear();
            for (const std::string& r : receivers) {
                req.receivers.push_back(jamrx::parse_receiver(r));
            }
        }
        if (sj_draws >= 0) req.plan.n_sj_draws = sj_draws;
        if (trials >= 0) req.plan.n_trials_per_sj = trials;
        if (seed >= 0) req.plan.seed = static_cast<std::uint64_t>(seed);
        if (workers >= 0) req.plan.worker_hint = workers;
        if (m_override > 0) req.config.m = m_override;
        if (!std::isnan(p_avg_db)) req.p_avg = jamrx::db_to_linear(p_avg_db);
        if (!out_csv.empty()) req.out_csv = out_csv;
        if (!out_svg.empty()) req.out_svg = out_svg;

        jamrx::run_scenario(req);
        return 0;
    } catch (const jamrx::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
}
