#pragma once

#include <iostream>
#include <map>

#include "jamrx/config_file.hpp"
#include "jamrx/powerctl.hpp"
#include "jamrx/svg.hpp"

namespace jamrx {

// Experiment runner mapping each scenario to one parameter sweep, a CSV with
// the fixed result schema, an optional SVG chart, and a short stdout summary.
// Everything downstream of the plan seed is deterministic, so a rerun with a
// different worker hint produces a byte-identical CSV.

namespace detail {

inline ResultRow base_row(const ScenarioRequest& req, const SystemConfig& c) {
    ResultRow row;
    row.scenario = scenario_name(req.kind);
    row.m = c.m;
    row.p_u = c.p_u;
    row.q_u = c.q_u;
    row.p_j = c.p_j;
    row.q_j = c.q_j;
    return row;
}

inline std::optional<double> receiver_mu(const ReceiverSpec& spec, const SystemConfig& c) {
    switch (spec.kind) {
        case ReceiverKind::mrc: return std::nullopt;
        case ReceiverKind::zf: return 0.0;
        case ReceiverKind::rzf: return spec.mu;
        case ReceiverKind::mmse: return c.q_j > 0.0 ? std::optional<double>(mmse_mu(c)) : std::nullopt;
    }
    return std::nullopt;
}

/// Closed-form ergodic rate where one exists (everything but MRC).
inline std::optional<RateEstimate> closed_rate(const SystemConfig& c, const ReceiverSpec& spec,
                                               const MonteCarloPlan& plan, DeltaSource src) {
    if (spec.kind == ReceiverKind::mrc) return std::nullopt;
    if (spec.kind == ReceiverKind::mmse && !(c.q_j > 0.0)) return std::nullopt;
    return expected_rate_closed(c, spec, plan.n_sj_draws, plan.seed, src, plan.worker_hint);
}

inline void maybe_emit_chart(const ScenarioRequest& req, const std::vector<Series>& series,
                             const ChartOptions& opts) {
    if (!req.out_svg.empty()) {
        emit_svg_chart(series, req.out_svg, opts);
        std::cout << "chart:   " << req.out_svg << "\n";
    }
}

struct SeriesMap {
    std::map<std::string, Series> by_label;
    std::vector<std::string> order;

    void add(const std::string& label, double x, double y) {
        auto it = by_label.find(label);
        if (it == by_label.end()) {
            order.push_back(label);
            it = by_label.emplace(label, Series{label, {}}).first;
        }
        it->second.points.emplace_back(x, y);
    }

    std::vector<Series> take() const {
        std::vector<Series> out;
        out.reserve(order.size());
        for (const std::string& label : order) {
            out.push_back(by_label.at(label));
        }
        return out;
    }
};

inline PilotBook request_pilot_book(const ScenarioRequest& req) {
    return make_pilot_book(req.config.tau, req.used_index, req.unused_index);
}

// Fig.-2 style sweep: rate vs M for each SNR and receiver, closed form next
// to Monte Carlo.
inline void run_sweep_m(const ScenarioRequest& req, std::vector<ResultRow>& rows,
                        SeriesMap& chart) {
    const PilotBook pilots = request_pilot_book(req);
    for (double snr_db : req.snr_db_list) {
        const double p = db_to_linear(snr_db);
        for (int m : req.m_list) {
            SystemConfig c = req.config;
            c.m = m;
            c.p_u = c.q_u = c.p_j = c.q_j = p;
            const auto mc = empirical_rates(c, req.receivers, req.plan, &pilots);
            for (std::size_t r = 0; r < req.receivers.size(); ++r) {
                const ReceiverSpec& spec = req.receivers[r];
                ResultRow row = base_row(req, c);
                row.receiver = receiver_name(spec);
                row.mu = receiver_mu(spec, c);
                row.delta_source = delta_source_name(DeltaSource::true_delta);
                row.rate_mc = mc[r].rate;
                row.ci95 = mc[r].ci95;
                if (const auto closed = closed_rate(c, spec, req.plan, DeltaSource::true_delta)) {
                    row.rate_closed = closed->rate;
                }
                rows.push_back(row);
                char label[64];
                std::snprintf(label, sizeof(label), "%s %gdB", receiver_name(spec).c_str(),
                              snr_db);
                chart.add(label, m, mc[r].rate);
            }
        }
    }
}

// Fig.-3/4 style sweeps over the jamming powers at fixed M.
inline void run_sweep_jam(const ScenarioRequest& req, std::vector<ResultRow>& rows,
                          SeriesMap& chart) {
    const PilotBook pilots = request_pilot_book(req);
    const bool both = req.kind == ScenarioKind::sweep_jam_both;
    for (double jam_db : req.jam_db_list) {
        SystemConfig c = req.config;
        c.p_j = db_to_linear(jam_db);
        if (both) {
            c.q_j = c.p_j;
        }
        const auto mc = empirical_rates(c, req.receivers, req.plan, &pilots);
        for (std::size_t r = 0; r < req.receivers.size(); ++r) {
            const ReceiverSpec& spec = req.receivers[r];
            ResultRow row = base_row(req, c);
            row.receiver = receiver_name(spec);
            row.mu = receiver_mu(spec, c);
            row.delta_source = delta_source_name(DeltaSource::true_delta);
            row.rate_mc = mc[r].rate;
            row.ci95 = mc[r].ci95;
            if (const auto closed = closed_rate(c, spec, req.plan, DeltaSource::true_delta)) {
                row.rate_closed = closed->rate;
                chart.add(receiver_name(spec) + " closed", jam_db, closed->rate);
            }
            rows.push_back(row);
            chart.add(receiver_name(spec) + " mc", jam_db, mc[r].rate);
        }
    }
}

// Fig.-5 style sweep over the pilot/data power ratio at a fixed energy
// budget, plus the M -> infinity reference curve.
inline void run_sweep_power_ratio(const ScenarioRequest& req, std::vector<ResultRow>& rows,
                                  SeriesMap& chart) {
    const PilotBook pilots = request_pilot_book(req);
    const double t = req.config.t_coh;
    const double tau = req.config.tau;
    const double energy = t * req.p_avg;
    std::map<std::string, std::pair<double, double>> best_mc;  // label -> (rate, ratio_db)
    for (double ratio_db : req.ratio_db_list) {
        const double ratio = db_to_linear(ratio_db);
        SystemConfig c = req.config;
        c.q_u = energy / ((t - tau) + tau * ratio);
        c.p_u = ratio * c.q_u;
        const auto mc = empirical_rates(c, req.receivers, req.plan, &pilots);
        for (std::size_t r = 0; r < req.receivers.size(); ++r) {
            const ReceiverSpec& spec = req.receivers[r];
            ResultRow row = base_row(req, c);
            row.receiver = receiver_name(spec);
            row.mu = receiver_mu(spec, c);
            row.delta_source = delta_source_name(DeltaSource::true_delta);
            row.rate_mc = mc[r].rate;
            row.ci95 = mc[r].ci95;
            if (const auto closed = closed_rate(c, spec, req.plan, DeltaSource::true_delta)) {
                row.rate_closed = closed->rate;
                chart.add(receiver_name(spec) + " closed", ratio_db, closed->rate);
            }
            rows.push_back(row);
            chart.add(receiver_name(spec) + " mc", ratio_db, mc[r].rate);
            const auto it = best_mc.find(receiver_name(spec));
            if (it == best_mc.end() || it->second.first < mc[r].rate) {
                best_mc[receiver_name(spec)] = {mc[r].rate, ratio_db};
            }
        }
        const RateEstimate asy =
            expected_rate_asymptotic(c, req.plan.n_sj_draws, req.plan.seed, req.plan.worker_hint);
        ResultRow row = base_row(req, c);
        row.receiver = "asymptotic";
        row.delta_source = delta_source_name(DeltaSource::true_delta);
        row.rate_closed = asy.rate;
        row.ci95 = asy.ci95;
        rows.push_back(row);
        chart.add("asymptotic", ratio_db, asy.rate);
    }
    // Peak locations: empirical argmax next to the closed-form predictions.
    const PowerSplit sub = suboptimal_power_split(req.config, req.p_avg);
    const PowerSplit asy = asymptotic_power_split(req.config.t_coh, req.config.tau, req.p_avg);
    std::cout << "peak power ratios p_u/q_u (dB):\n";
    for (const auto& [label, best] : best_mc) {
        std::cout << "  " << label << " mc argmax: " << best.second << "\n";
    }
    std::cout << "  mean-delta allocation predicts: " << 10.0 * std::log10(sub.p_u / sub.q_u)
              << "\n  asymptotic allocation predicts: " << 10.0 * std::log10(asy.p_u / asy.q_u)
              << "\n";
}

// Fig.-6 style comparison of power allocations, all with the ZF receiver
// (plus an MRC baseline), swept over M.
inline void run_power_alloc(const ScenarioRequest& req, std::vector<ResultRow>& rows,
                            SeriesMap& chart) {
    const PilotBook pilots = request_pilot_book(req);
    for (int m : req.m_list) {
        SystemConfig c = req.config;
        c.m = m;

        struct Alloc {
            const char* label;
            PowerSplit split;
            DeltaSource source;
        };
        const std::vector<Alloc> allocs = {
            {"equal", {req.p_avg, req.p_avg}, DeltaSource::true_delta},
            {"asymptotic", asymptotic_power_split(c.t_coh, c.tau, req.p_avg),
             DeltaSource::true_delta},
            {"suboptimal", suboptimal_power_split(c, req.p_avg), DeltaSource::mean},
        };
        const ReceiverSpec zf{ReceiverKind::zf, 0.0};

        for (const Alloc& alloc : allocs) {
            SystemConfig ca = c;
            ca.p_u = alloc.split.p_u;
            ca.q_u = alloc.split.q_u;
            const RateEstimate mc = empirical_rates(ca, {zf}, req.plan, &pilots).front();
            const auto closed = closed_rate(ca, zf, req.plan, DeltaSource::true_delta);
            ResultRow row = base_row(req, ca);
            row.receiver = "zf";
            row.mu = 0.0;
            row.delta_source = alloc.source == DeltaSource::mean
                                   ? delta_source_name(DeltaSource::mean)
                                   : delta_source_name(DeltaSource::true_delta);
            row.rate_mc = mc.rate;
            row.ci95 = mc.ci95;
            if (closed) row.rate_closed = closed->rate;
            rows.push_back(row);
            chart.add(std::string("zf ") + alloc.label, m, mc.rate);
        }

        // Upper bound: the optimal allocation re-solved per jamming draw with
        // the true correlations.
        {
            std::vector<double> rates(static_cast<std::size_t>(req.plan.n_sj_draws));
            std::vector<double> rates_closed(rates.size());
            parallel_for(rates.size(), req.plan.worker_hint, [&](std::size_t k) {
                PhiloxRng sj_rng(req.plan.seed, StreamDomain::jammer_draw,
                                 static_cast<std::uint32_t>(k));
                const JammerSequence s_j = sample_jammer_sequence(c.tau, sj_rng);
                const DeltaPair d = deltas_for(s_j, pilots);
                SystemConfig ca = c;
                const PowerSplit split = optimal_power_split_zf(c, d, req.p_avg);
                ca.p_u = split.p_u;
                ca.q_u = split.q_u;
                TrialOptions opts;
                opts.sj_tag = static_cast<std::uint32_t>(k);
                opts.workers = 1;
                opts.pilots = &pilots;
                const SinrBreakdown b =
                    empirical_sinr(ca, zf, s_j, req.plan.n_trials_per_sj, req.plan.seed, opts);
                rates[k] = achievable_rate(b.sinr, ca.tau, ca.t_coh);
                rates_closed[k] = achievable_rate(rho_zf_closed(ca, d), ca.tau, ca.t_coh);
            });
            const RateEstimate mc = detail::reduce_rates(rates);
            const RateEstimate closed = detail::reduce_rates(rates_closed);
            ResultRow row = base_row(req, c);
            row.p_u.reset();  // varies per jamming draw
            row.q_u.reset();
            row.receiver = "zf";
            row.mu = 0.0;
            row.delta_source = delta_source_name(DeltaSource::true_delta);
            row.rate_mc = mc.rate;
            row.ci95 = mc.ci95;
            row.rate_closed = closed.rate;
            rows.push_back(row);
            chart.add("zf optimal (upper bound)", m, mc.rate);
        }

        // MRC baseline at the equal split.
        {
            SystemConfig ca = c;
            ca.p_u = req.p_avg;
            ca.q_u = req.p_avg;
            const ReceiverSpec mrc{ReceiverKind::mrc, 0.0};
            const RateEstimate mc = empirical_rates(ca, {mrc}, req.plan, &pilots).front();
            ResultRow row = base_row(req, ca);
            row.receiver = "mrc";
            row.delta_source = delta_source_name(DeltaSource::true_delta);
            row.rate_mc = mc.rate;
            row.ci95 = mc.ci95;
            rows.push_back(row);
            chart.add("mrc equal", m, mc.rate);
        }
    }
}

// Fig.-7 style: delta-estimation NMSE per antenna count and user power, plus
// closed-form rates from estimated versus true correlations.
inline void run_delta_nmse(const ScenarioRequest& req, std::vector<ResultRow>& rows,
                           SeriesMap& chart) {
    const std::string nmse_path = req.out_csv + ".nmse.csv";
    std::ofstream nmse_out(nmse_path, std::ios::binary);
    if (!nmse_out) {
        throw IoError("cannot open " + nmse_path + " for writing");
    }
    nmse_out << "scenario,M,p_u_db,n_runs,nmse_delta1,nmse_delta2\n";
    const ReceiverSpec zf{ReceiverKind::zf, 0.0};
    for (double pu_db : req.pu_db_list) {
        SystemConfig c = req.config;
        c.p_u = db_to_linear(pu_db);
        c.q_u = c.p_u;
        const auto table = nmse_delta(c, req.m_list, req.plan.n_sj_draws, req.plan.seed,
                                      req.plan.worker_hint);
        for (const NmseRow& r : table) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s,%d,%g,%d,%.9g,%.9g\n",
                          scenario_name(req.kind), r.m, pu_db, req.plan.n_sj_draws,
                          r.nmse_delta1, r.nmse_delta2);
            nmse_out << buf;
            char label[48];
            std::snprintf(label, sizeof(label), "nmse d1 %gdB", pu_db);
            chart.add(label, r.m, r.nmse_delta1);
            std::snprintf(label, sizeof(label), "nmse d2 %gdB", pu_db);
            chart.add(label, r.m, r.nmse_delta2);
        }
        for (int m : req.m_list) {
            SystemConfig cm = c;
            cm.m = m;
            for (DeltaSource src : {DeltaSource::true_delta, DeltaSource::estimated}) {
                const RateEstimate rate = expected_rate_closed(cm, zf, req.plan.n_sj_draws,
                                                               req.plan.seed, src,
                                                               req.plan.worker_hint);
                ResultRow row = base_row(req, cm);
                row.receiver = "zf";
                row.mu = 0.0;
                row.delta_source = delta_source_name(src);
                row.rate_closed = rate.rate;
                row.ci95 = rate.ci95;
                rows.push_back(row);
            }
        }
    }
    if (!nmse_out) {
        throw IoError("write failure on " + nmse_path);
    }
    std::cout << "nmse table: " << nmse_path << "\n";
}

// Closed form versus Monte Carlo for one fixed jamming sequence across M.
inline void run_validate(const ScenarioRequest& req, std::vector<ResultRow>& rows,
                         SeriesMap& chart) {
    for (const ReceiverSpec& spec : req.receivers) {
        if (spec.kind == ReceiverKind::mrc) {
            std::cout << "validate: skipping mrc (no closed form)\n";
            continue;
        }
        const auto report = convergence_report(req.config, spec, req.m_list, req.plan);
        std::cout << "receiver " << receiver_name(spec) << " (fixed s_j):\n"
                  << "      M    closed        mc   rel.gap\n";
        for (const ConvergenceRow& r : report) {
            SystemConfig c = req.config;
            c.m = r.m;
            ResultRow row = base_row(req, c);
            row.receiver = receiver_name(spec);
            row.mu = receiver_mu(spec, c);
            row.delta_source = delta_source_name(DeltaSource::true_delta);
            row.sinr_closed = r.sinr_closed;
            row.sinr_mc = r.sinr_mc;
            row.rate_closed = achievable_rate(r.sinr_closed, c.tau, c.t_coh);
            row.rate_mc = achievable_rate(r.sinr_mc, c.tau, c.t_coh);
            rows.push_back(row);
            char buf[96];
            std::snprintf(buf, sizeof(buf), "  %5d  %8.3f  %8.3f  %7.2f%%\n", r.m, r.sinr_closed,
                          r.sinr_mc, 100.0 * r.rel_gap);
            std::cout << buf;
            chart.add(receiver_name(spec) + " closed", r.m, r.sinr_closed);
            chart.add(receiver_name(spec) + " mc", r.m, r.sinr_mc);
        }
    }
}

}  // namespace detail

/// Execute one scenario: runs the mapped experiment, writes the CSV (and the
/// optional SVG), and prints a short summary. Throws ConfigError for
/// parameter problems and IoError/runtime_error for execution failures.
inline void run_scenario(const ScenarioRequest& req) {
    require_valid(req.config);
    if (req.receivers.empty()) {
        throw ConfigError("run_scenario: no receivers selected");
    }

    std::vector<ResultRow> rows;
    detail::SeriesMap chart;
    ChartOptions chart_opts;
    chart_opts.title = scenario_name(req.kind);
    chart_opts.y_label = "rate (bits/symbol)";

    switch (req.kind) {
        case ScenarioKind::sweep_m:
            chart_opts.x_label = "antennas M";
            detail::run_sweep_m(req, rows, chart);
            break;
        case ScenarioKind::sweep_jam_both:
        case ScenarioKind::sweep_jam_pilot:
            chart_opts.x_label = req.kind == ScenarioKind::sweep_jam_both
                                     ? "jamming power p_j = q_j (dB)"
                                     : "jamming pilot power p_j (dB)";
            detail::run_sweep_jam(req, rows, chart);
            break;
        case ScenarioKind::sweep_power_ratio:
            chart_opts.x_label = "power ratio p_u/q_u (dB)";
            detail::run_sweep_power_ratio(req, rows, chart);
            break;
        case ScenarioKind::power_alloc:
            chart_opts.x_label = "antennas M";
            detail::run_power_alloc(req, rows, chart);
            break;
        case ScenarioKind::delta_nmse:
            chart_opts.x_label = "antennas M";
            chart_opts.y_label = "NMSE";
            detail::run_delta_nmse(req, rows, chart);
            break;
        case ScenarioKind::validate:
            chart_opts.x_label = "antennas M";
            chart_opts.y_label = "effective SINR";
            detail::run_validate(req, rows, chart);
            break;
    }

    emit_csv(rows, req.out_csv);
    std::cout << "results: " << req.out_csv << " (" << rows.size() << " rows)\n";
    detail::maybe_emit_chart(req, chart.take(), chart_opts);
}

}  // namespace jamrx
