#pragma once

#include <cmath>
#include <optional>

#include "jamrx/parallel.hpp"
#include "jamrx/receivers.hpp"

namespace jamrx {

// Closed-form large-scale SINR approximations. All formulas keep the mu/M
// terms so that finite-M RZF/MMSE behavior matches the analysis curves; they
// collapse to the ZF expressions at mu = 0.

struct ClosedFormInputs {
    SystemConfig config;
    DeltaPair deltas;
    double mu = 0.0;
};

/// gamma_j = tau p_j delta2 beta_j + sigma2; strictly positive.
inline double gamma_j(const SystemConfig& c, const DeltaPair& d) {
    return c.tau * c.p_j * d.delta2 * c.beta_j + c.sigma2;
}

/// Large-scale effective SINR of the RZF receiver with regularization mu.
inline double rho_rzf_closed(const SystemConfig& c, const DeltaPair& d, double mu) {
    const double eta_j2 = 1.0 / (c.p_j * c.beta_j + c.sigma2);
    const double gj = gamma_j(c, d);
    const double mu_m = mu / static_cast<double>(c.m);
    const double num_frac = mu_m + eta_j2 * c.sigma2;
    const double den_frac = mu_m + eta_j2 * gj;
    const double jam_ratio = num_frac / den_frac;
    const double self = c.tau * c.p_u * c.q_u * c.beta_u * c.beta_u;
    const double jam = static_cast<double>(c.m) * c.tau * c.p_j * c.q_j * d.delta1 * c.beta_j *
                       c.beta_j * jam_ratio * jam_ratio;
    const double noise =
        c.sigma2 * (c.tau * c.p_u * c.beta_u + c.sigma2 +
                    c.tau * c.p_j * d.delta1 * c.beta_j *
                        (c.tau * c.p_j * d.delta2 * eta_j2 * eta_j2 * c.sigma2 * c.beta_j +
                         num_frac * num_frac) /
                        (den_frac * den_frac));
    return c.m * self / (self + jam + noise);
}

inline double rho_rzf_closed(const ClosedFormInputs& in) {
    return rho_rzf_closed(in.config, in.deltas, in.mu);
}

/// ZF-type receiver: the mu = 0 specialization, written directly.
inline double rho_zf_closed(const SystemConfig& c, const DeltaPair& d) {
    const double gj = gamma_j(c, d);
    const double self = c.tau * c.p_u * c.q_u * c.beta_u * c.beta_u;
    const double jam = static_cast<double>(c.m) * c.tau * c.p_j * c.q_j * d.delta1 * c.beta_j *
                       c.beta_j * c.sigma2 * c.sigma2 / (gj * gj);
    const double noise = c.sigma2 * (c.tau * c.p_u * c.beta_u + c.sigma2 +
                                     c.tau * c.p_j * d.delta1 * c.beta_j * c.sigma2 / gj);
    return c.m * self / (self + jam + noise);
}

/// MMSE-type receiver: RZF at mu = sigma_e^2 / q_j.
inline double rho_mmse_closed(const SystemConfig& c, const DeltaPair& d) {
    return rho_rzf_closed(c, d, mmse_mu(c));
}

/// SINR limit shared by ZF/MMSE/RZF as M -> infinity. The limit is unbounded
/// (and reported as nullopt, never a huge float) when delta1 = 0 or the
/// jammer is silent in either phase.
inline std::optional<double> rho_asymptotic(const SystemConfig& c, const DeltaPair& d) {
    if (!(d.delta1 > 0.0) || !(c.p_j * c.q_j > 0.0)) {
        return std::nullopt;
    }
    const double gj = gamma_j(c, d);
    return gj * gj / (d.delta1 * c.sigma2 * c.sigma2) * (c.p_u * c.q_u * c.beta_u * c.beta_u) /
           (c.p_j * c.q_j * c.beta_j * c.beta_j);
}

/// The nonnegative gap M tau p_u q_u beta_u^2 (1/rho_RZF - 1/rho_ZF),
/// evaluated through the factored identity from the dominance proof:
///   tau p_j q_j d1 beta_j^2 mu (gj - s2) / (gj (mu/M + ej2 gj)) * (A + s2/gj)
///   + tau p_j d1 beta_j s2 (gj - s2)/gj * (mu/M / (mu/M + ej2 gj))^2
/// with A the jamming-ratio fraction. Both parenthesized factors carry
/// gamma_j - sigma2 >= 0, which is the dominance argument.
inline double rzf_zf_gap(const SystemConfig& c, const DeltaPair& d, double mu) {
    const double eta_j2 = 1.0 / (c.p_j * c.beta_j + c.sigma2);
    const double gj = gamma_j(c, d);
    const double mu_m = mu / static_cast<double>(c.m);
    const double den_frac = mu_m + eta_j2 * gj;
    const double ratio = (mu_m + eta_j2 * c.sigma2) / den_frac;
    const double excess = gj - c.sigma2;  // = tau p_j delta2 beta_j >= 0
    const double jam_part = c.tau * c.p_j * c.q_j * d.delta1 * c.beta_j * c.beta_j * mu * excess /
                            (gj * den_frac) * (ratio + c.sigma2 / gj);
    const double noise_part = c.tau * c.p_j * d.delta1 * c.beta_j * c.sigma2 * excess / gj *
                              (mu_m / den_frac) * (mu_m / den_frac);
    return jam_part + noise_part;
}

/// Strong-jamming limit of the ZF SINR for p_j = lambda q_j -> infinity.
inline double strong_jamming_limit_zf(const SystemConfig& c, double lambda, const DeltaPair& d) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("strong_jamming_limit_zf: lambda must be > 0");
    }
    if (!(d.delta2 > 0.0)) {
        throw std::invalid_argument("strong_jamming_limit_zf: limit degenerates at delta2 = 0");
    }
    const double self = c.tau * c.p_u * c.q_u * c.beta_u * c.beta_u;
    const double s4 = c.sigma2 * c.sigma2;
    return c.m * self /
           (self + c.m * d.delta1 * s4 / (lambda * c.tau * d.delta2 * d.delta2) +
            c.sigma2 * (c.tau * c.p_u * c.beta_u + c.sigma2 + d.delta1 / d.delta2 * c.sigma2));
}

/// (1 - tau/T) log2(1 + sinr), the rate after estimation overhead.
inline double achievable_rate(double sinr, int tau, int t_coh) {
    if (tau >= t_coh) {
        throw std::invalid_argument("achievable_rate: requires tau < t_coh");
    }
    return (1.0 - static_cast<double>(tau) / t_coh) * std::log2(1.0 + sinr);
}

enum class DeltaSource { true_delta, estimated, mean };

inline const char* delta_source_name(DeltaSource s) {
    switch (s) {
        case DeltaSource::true_delta: return "true";
        case DeltaSource::estimated: return "estimated";
        case DeltaSource::mean: return "mean";
    }
    return "?";
}

struct RateEstimate {
    double rate = 0.0;
    double ci95 = 0.0;
};

namespace detail {

inline RateEstimate reduce_rates(const std::vector<double>& rates) {
    const double n = static_cast<double>(rates.size());
    double sum = 0.0;
    for (double r : rates) {
        sum += r;
    }
    const double mean = sum / n;
    if (rates.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double r : rates) {
        ss += (r - mean) * (r - mean);
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, 1.96 * sd / std::sqrt(n)};
}

}  // namespace detail

/// Ergodic rate of a closed-form receiver: average the large-scale rate over
/// independent draws of s_j. delta per draw comes from the true correlations,
/// from the power-based estimator applied to one simulated pilot observation,
/// or from the mean value 1/tau. Deterministic given the seed; draws are
/// processed in parallel and reduced in draw order.
inline RateEstimate expected_rate_closed(const SystemConfig& c, const ReceiverSpec& spec,
                                         int n_sj_draws, std::uint64_t seed,
                                         DeltaSource source = DeltaSource::true_delta,
                                         int workers = 0) {
    require_valid(c);
    if (n_sj_draws < 1) {
        throw std::invalid_argument("expected_rate_closed: n_sj_draws must be >= 1");
    }
    if (spec.kind == ReceiverKind::mrc) {
        throw std::invalid_argument("expected_rate_closed: no closed form for MRC");
    }
    const PilotBook pilots = make_pilot_book(c.tau, 0, 1);
    std::vector<double> rates(static_cast<std::size_t>(n_sj_draws));
    parallel_for(rates.size(), workers, [&](std::size_t k) {
        DeltaPair d{1.0 / c.tau, 1.0 / c.tau};
        if (source != DeltaSource::mean) {
            PhiloxRng sj_rng(seed, StreamDomain::jammer_draw, static_cast<std::uint32_t>(k));
            const JammerSequence s_j = sample_jammer_sequence(c.tau, sj_rng);
            if (source == DeltaSource::true_delta) {
                d = deltas_for(s_j, pilots);
            } else {
                PhiloxRng rng(seed, StreamDomain::closed_rate, static_cast<std::uint32_t>(k));
                const ChannelRealization ch = sample_channels(c, rng);
                const PilotObservation y_t = pilot_phase(c, pilots, s_j, ch, rng);
                d = estimate_deltas(correlate_user_pilot(y_t, pilots),
                                    project_unused_pilot(y_t, pilots), c);
            }
        }
        double rho = 0.0;
        switch (spec.kind) {
            case ReceiverKind::zf: rho = rho_zf_closed(c, d); break;
            case ReceiverKind::mmse: rho = rho_mmse_closed(c, d); break;
            case ReceiverKind::rzf: rho = rho_rzf_closed(c, d, spec.mu); break;
            case ReceiverKind::mrc: break;  // rejected above
        }
        rates[k] = achievable_rate(rho, c.tau, c.t_coh);
    });
    return detail::reduce_rates(rates);
}

/// Ergodic rate implied by the common M -> infinity SINR limit.
inline RateEstimate expected_rate_asymptotic(const SystemConfig& c, int n_sj_draws,
                                             std::uint64_t seed, int workers = 0) {
    require_valid(c);
    if (n_sj_draws < 1) {
        throw std::invalid_argument("expected_rate_asymptotic: n_sj_draws must be >= 1");
    }
    const PilotBook pilots = make_pilot_book(c.tau, 0, 1);
    std::vector<double> rates(static_cast<std::size_t>(n_sj_draws));
    parallel_for(rates.size(), workers, [&](std::size_t k) {
        PhiloxRng sj_rng(seed, StreamDomain::jammer_draw, static_cast<std::uint32_t>(k));
        const JammerSequence s_j = sample_jammer_sequence(c.tau, sj_rng);
        const auto rho = rho_asymptotic(c, deltas_for(s_j, pilots));
        if (!rho) {
            throw std::runtime_error("expected_rate_asymptotic: unbounded limit for a drawn s_j");
        }
        rates[k] = achievable_rate(*rho, c.tau, c.t_coh);
    });
    return detail::reduce_rates(rates);
}

}  // namespace jamrx
