#pragma once

#include "jamrx/analysis.hpp"

namespace jamrx {

// Empirical estimation of the effective-SINR power terms and the ergodic
// rate. Per-trial randomness comes from the counter-based stream
// (seed, trial domain, sj index, trial index), so results are a pure function
// of the plan: any worker count, and joint or separate receiver evaluation,
// produce bit-identical output. Reductions always run in index order.

/// The four conditional power terms of the effective SINR, estimated from
/// sample moments of a^H h, a^H g, ||a||^2 across trials.
struct SinrBreakdown {
    double signal_power = 0.0;      // q_u |E{a^H h | s_j}|^2
    double gain_uncertainty = 0.0;  // q_u var{a^H h | s_j}
    double jamming_power = 0.0;     // q_j E{|a^H g|^2 | s_j}
    double noise_power = 0.0;       // sigma2 E{||a||^2 | s_j}
    double sinr = 0.0;
    long n_trials = 0;
};

struct MonteCarloPlan {
    int n_sj_draws = 500;
    int n_trials_per_sj = 2000;
    std::uint64_t seed = 1;
    int worker_hint = 0;  // <= 0: use all hardware threads
};

struct TrialOptions {
    std::uint32_t sj_tag = 0;           // stream coordinate of this jamming draw
    int workers = 0;                    // parallelism for the trial loop
    const PilotBook* pilots = nullptr;  // defaults to indices (0, 1)
};

namespace detail {

struct TrialRecord {
    cdouble ah;  // a^H h
    double ag2;  // |a^H g|^2
    double a2;   // ||a||^2
};

/// Run the full pilot -> estimate -> filter chain for every trial, evaluating
/// all receivers on the same draws (common random numbers). The data phase is
/// drawn as part of each trial so symbol randomness is part of the stream.
inline std::vector<std::vector<TrialRecord>> run_trials(const SystemConfig& c,
                                                        const std::vector<ReceiverSpec>& specs,
                                                        const JammerSequence& s_j, int n_trials,
                                                        std::uint64_t seed,
                                                        const TrialOptions& opts) {
    require_valid(c);
    if (n_trials < 2) {
        throw std::invalid_argument("run_trials: need at least 2 trials for a variance estimate");
    }
    PilotBook local_book;
    const PilotBook* pilots = opts.pilots;
    if (pilots == nullptr) {
        local_book = make_pilot_book(c.tau, 0, 1);
        pilots = &local_book;
    }
    std::vector<std::vector<TrialRecord>> records(specs.size());
    for (auto& r : records) {
        r.resize(static_cast<std::size_t>(n_trials));
    }
    parallel_for(static_cast<std::size_t>(n_trials), opts.workers, [&](std::size_t t) {
        PhiloxRng rng(seed, StreamDomain::trial, opts.sj_tag, static_cast<std::uint32_t>(t));
        const ChannelRealization ch = sample_channels(c, rng);
        const PilotObservation y_t = pilot_phase(c, *pilots, s_j, ch, rng);
        const ChannelEstimates est = estimate_channels(y_t, *pilots, c);
        for (std::size_t r = 0; r < specs.size(); ++r) {
            const ReceiveFilter filter = build_filter(est, specs[r], c);
            records[r][t] = {vdot(filter.a, ch.h), std::norm(vdot(filter.a, ch.g)),
                             norm2(filter.a)};
        }
        const DataObservation y_d = data_phase(c, ch, rng);
        ReceiveFilter probe = build_filter(est, specs.front(), c);
        if (!std::isfinite(std::norm(apply_filter(probe, y_d)))) {
            throw std::runtime_error("run_trials: non-finite filtered data sample");
        }
    });
    return records;
}

inline SinrBreakdown reduce_breakdown(const std::vector<TrialRecord>& rec, const SystemConfig& c) {
    const double n = static_cast<double>(rec.size());
    cdouble ah_sum{0.0, 0.0};
    double ag2_sum = 0.0;
    double a2_sum = 0.0;
    for (const TrialRecord& r : rec) {
        ah_sum += r.ah;
        ag2_sum += r.ag2;
        a2_sum += r.a2;
    }
    const cdouble ah_mean = ah_sum / n;
    double var_sum = 0.0;
    for (const TrialRecord& r : rec) {
        var_sum += std::norm(r.ah - ah_mean);
    }
    SinrBreakdown b;
    b.signal_power = c.q_u * std::norm(ah_mean);
    b.gain_uncertainty = c.q_u * var_sum / (n - 1.0);
    b.jamming_power = c.q_j * ag2_sum / n;
    b.noise_power = c.sigma2 * a2_sum / n;
    b.n_trials = static_cast<long>(rec.size());
    const double denom = b.gain_uncertainty + b.jamming_power + b.noise_power;
    if (!(denom > 0.0)) {
        throw std::runtime_error("empirical_sinr: degenerate denominator (all-zero filter?)");
    }
    b.sinr = b.signal_power / denom;
    return b;
}

}  // namespace detail

/// Conditional SINR breakdown for one receiver and one fixed s_j.
inline SinrBreakdown empirical_sinr(const SystemConfig& c, const ReceiverSpec& spec,
                                    const JammerSequence& s_j, int n_trials, std::uint64_t seed,
                                    const TrialOptions& opts = {}) {
    const auto records = detail::run_trials(c, {spec}, s_j, n_trials, seed, opts);
    return detail::reduce_breakdown(records.front(), c);
}

/// Conditional SINR breakdowns for several receivers on shared draws.
inline std::vector<SinrBreakdown> empirical_sinr_multi(const SystemConfig& c,
                                                       const std::vector<ReceiverSpec>& specs,
                                                       const JammerSequence& s_j, int n_trials,
                                                       std::uint64_t seed,
                                                       const TrialOptions& opts = {}) {
    const auto records = detail::run_trials(c, specs, s_j, n_trials, seed, opts);
    std::vector<SinrBreakdown> out;
    out.reserve(specs.size());
    for (const auto& rec : records) {
        out.push_back(detail::reduce_breakdown(rec, c));
    }
    return out;
}

/// Ergodic rates for several receivers: average (1 - tau/T) log2(1 + sinr)
/// over independent jamming sequences, all receivers on common draws.
inline std::vector<RateEstimate> empirical_rates(const SystemConfig& c,
                                                 const std::vector<ReceiverSpec>& specs,
                                                 const MonteCarloPlan& plan,
                                                 const PilotBook* pilots = nullptr) {
    require_valid(c);
    if (plan.n_sj_draws < 1 || plan.n_trials_per_sj < 2) {
        throw std::invalid_argument("empirical_rates: invalid Monte Carlo plan");
    }
    std::vector<std::vector<double>> rates(specs.size());
    for (auto& r : rates) {
        r.resize(static_cast<std::size_t>(plan.n_sj_draws));
    }
    PilotBook local_book;
    if (pilots == nullptr) {
        local_book = make_pilot_book(c.tau, 0, 1);
        pilots = &local_book;
    }
    parallel_for(static_cast<std::size_t>(plan.n_sj_draws), plan.worker_hint, [&](std::size_t k) {
        PhiloxRng sj_rng(plan.seed, StreamDomain::jammer_draw, static_cast<std::uint32_t>(k));
        const JammerSequence s_j = sample_jammer_sequence(c.tau, sj_rng);
        TrialOptions opts;
        opts.sj_tag = static_cast<std::uint32_t>(k);
        opts.workers = 1;
        opts.pilots = pilots;
        const auto records =
            detail::run_trials(c, specs, s_j, plan.n_trials_per_sj, plan.seed, opts);
        for (std::size_t r = 0; r < specs.size(); ++r) {
            const SinrBreakdown b = detail::reduce_breakdown(records[r], c);
            rates[r][k] = achievable_rate(b.sinr, c.tau, c.t_coh);
        }
    });
    std::vector<RateEstimate> out;
    out.reserve(specs.size());
    for (const auto& r : rates) {
        out.push_back(detail::reduce_rates(r));
    }
    return out;
}

inline RateEstimate empirical_rate(const SystemConfig& c, const ReceiverSpec& spec,
                                   const MonteCarloPlan& plan) {
    return empirical_rates(c, {spec}, plan).front();
}

struct NmseRow {
    int m = 0;
    double nmse_delta1 = 0.0;
    double nmse_delta2 = 0.0;
};

/// Normalized mean square errors of the power-based delta estimator across
/// antenna counts: E{|dhat - d|^2} / E{|d|^2} over fresh (s_j, h, g, N_t)
/// draws per run. Uses the raw inversion: the simplex rescaling applied for
/// closed-form consumption couples the pair and would re-introduce a p_u
/// dependence into the delta2 error.
inline std::vector<NmseRow> nmse_delta(const SystemConfig& base, const std::vector<int>& m_list,
                                       int n_runs, std::uint64_t seed, int workers = 0) {
    if (n_runs < 10) {
        throw std::invalid_argument("nmse_delta: n_runs must be >= 10");
    }
    const PilotBook pilots = make_pilot_book(base.tau, 0, 1);
    std::vector<NmseRow> table(m_list.size());
    for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
        SystemConfig c = base;
        c.m = m_list[mi];
        require_valid(c);
        std::vector<std::array<double, 4>> acc(static_cast<std::size_t>(n_runs));
        parallel_for(acc.size(), workers, [&](std::size_t r) {
            PhiloxRng rng(seed, StreamDomain::nmse, static_cast<std::uint32_t>(mi),
                          static_cast<std::uint32_t>(r));
            const JammerSequence s_j = sample_jammer_sequence(c.tau, rng);
            const DeltaPair truth = deltas_for(s_j, pilots);
            const ChannelRealization ch = sample_channels(c, rng);
            const PilotObservation y_t = pilot_phase(c, pilots, s_j, ch, rng);
            const DeltaPair est = estimate_deltas_raw(correlate_user_pilot(y_t, pilots),
                                                      project_unused_pilot(y_t, pilots), c);
            const double e1 = est.delta1 - truth.delta1;
            const double e2 = est.delta2 - truth.delta2;
            acc[r] = {e1 * e1, e2 * e2, truth.delta1 * truth.delta1, truth.delta2 * truth.delta2};
        });
        double err1 = 0.0, err2 = 0.0, ref1 = 0.0, ref2 = 0.0;
        for (const auto& a : acc) {
            err1 += a[0];
            err2 += a[1];
            ref1 += a[2];
            ref2 += a[3];
        }
        table[mi] = {c.m, err1 / ref1, err2 / ref2};
    }
    return table;
}

struct ConvergenceRow {
    int m = 0;
    double sinr_closed = 0.0;
    double sinr_mc = 0.0;
    double rel_gap = 0.0;
};

/// Relative gap between the empirical SINR and the matching closed form for a
/// fixed s_j across antenna counts; the gap should trend down with M.
inline std::vector<ConvergenceRow> convergence_report(const SystemConfig& base,
                                                      const ReceiverSpec& spec,
                                                      const std::vector<int>& m_list,
                                                      const MonteCarloPlan& plan) {
    if (spec.kind == ReceiverKind::mrc) {
        throw std::invalid_argument("convergence_report: no closed form for MRC");
    }
    const PilotBook pilots = make_pilot_book(base.tau, 0, 1);
    PhiloxRng sj_rng(plan.seed, StreamDomain::jammer_draw, 0);
    const JammerSequence s_j = sample_jammer_sequence(base.tau, sj_rng);
    const DeltaPair d = deltas_for(s_j, pilots);
    std::vector<ConvergenceRow> rows;
    rows.reserve(m_list.size());
    for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
        SystemConfig c = base;
        c.m = m_list[mi];
        double closed = 0.0;
        switch (spec.kind) {
            case ReceiverKind::zf: closed = rho_zf_closed(c, d); break;
            case ReceiverKind::mmse: closed = rho_mmse_closed(c, d); break;
            case ReceiverKind::rzf: closed = rho_rzf_closed(c, d, spec.mu); break;
            case ReceiverKind::mrc: break;  // rejected above
        }
        TrialOptions opts;
        opts.sj_tag = static_cast<std::uint32_t>(mi);
        opts.workers = plan.worker_hint;
        opts.pilots = &pilots;
        const SinrBreakdown b =
            empirical_sinr(c, spec, s_j, plan.n_trials_per_sj, plan.seed, opts);
        rows.push_back({c.m, closed, b.sinr, std::abs(b.sinr - closed) / closed});
    }
    return rows;
}

}  // namespace jamrx
