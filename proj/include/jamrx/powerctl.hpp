#pragma once

#include "jamrx/analysis.hpp"

namespace jamrx {

// Pilot/data power allocation for the legitimate user under the per-block
// energy budget tau p_u + (T - tau) q_u <= T P_u.

struct PowerSplit {
    double p_u = 0.0;
    double q_u = 0.0;
};

/// M -> infinity optimum: split the block energy equally between the phases.
inline PowerSplit asymptotic_power_split(int t_coh, int tau, double p_avg) {
    if (tau < 1 || tau >= t_coh) {
        throw std::invalid_argument("asymptotic_power_split: requires 0 < tau < t_coh");
    }
    if (!(p_avg > 0.0)) {
        throw std::invalid_argument("asymptotic_power_split: p_avg must be > 0");
    }
    const double energy = static_cast<double>(t_coh) * p_avg;
    return {energy / (2.0 * tau), energy / (2.0 * (t_coh - tau))};
}

/// nu, the jamming-and-noise constant of the finite-M allocation problem.
inline double allocation_nu(const SystemConfig& c, const DeltaPair& d) {
    const double gj = gamma_j(c, d);
    const double s4 = c.sigma2 * c.sigma2;
    return c.tau * c.p_j * c.beta_j * d.delta1 * s4 / gj * (c.m * c.q_j * c.beta_j / gj + 1.0) + s4;
}

/// nu with both correlations replaced by their mean 1/tau, which collapses to
/// an expression free of tau and delta.
inline double allocation_nu_mean(const SystemConfig& c) {
    const double pb = c.p_j * c.beta_j + c.sigma2;
    const double s4 = c.sigma2 * c.sigma2;
    return c.p_j * c.beta_j * s4 / pb * (c.m * c.q_j * c.beta_j / pb + 1.0) + s4;
}

namespace detail {

inline PowerSplit split_from_nu(double nu, int t_coh, int tau, double beta_u, double sigma2,
                                double p_avg) {
    const double bs = beta_u * sigma2;
    const double energy = static_cast<double>(t_coh) * p_avg;
    const double root = std::sqrt(nu + bs * energy);
    const double p_u = (std::sqrt(nu * nu + nu * bs * energy) - nu) / (tau * bs);
    const double q_u = root * (root - std::sqrt(nu)) / ((t_coh - tau) * bs);
    return {p_u, q_u};
}

}  // namespace detail

/// Finite-M optimum of the ZF-type SINR over the budget line; needs the true
/// correlations of s_j, so the resulting rate is an upper bound achievable
/// with perfect knowledge of the jamming sequence.
inline PowerSplit optimal_power_split_zf(const SystemConfig& c, const DeltaPair& d, double p_avg) {
    if (!(c.beta_u > 0.0) || !(c.sigma2 > 0.0) || !(p_avg > 0.0)) {
        throw std::invalid_argument("optimal_power_split_zf: beta_u, sigma2, p_avg must be > 0");
    }
    return detail::split_from_nu(allocation_nu(c, d), c.t_coh, c.tau, c.beta_u, c.sigma2, p_avg);
}

/// Same closed form with the mean correlations; usable before the pilot phase.
inline PowerSplit suboptimal_power_split(const SystemConfig& c, double p_avg) {
    if (!(c.beta_u > 0.0) || !(c.sigma2 > 0.0) || !(p_avg > 0.0)) {
        throw std::invalid_argument("suboptimal_power_split: beta_u, sigma2, p_avg must be > 0");
    }
    return detail::split_from_nu(allocation_nu_mean(c), c.t_coh, c.tau, c.beta_u, c.sigma2, p_avg);
}

/// Brute-force oracle: evaluate the objective at n_points equally spaced q_u
/// values on [0, T P_u / (T - tau)], p_u fixed by budget equality. Ties keep
/// the first maximizer.
template <typename Objective>
PowerSplit grid_search_power_split(Objective&& objective, int t_coh, int tau, double p_avg,
                                   int n_points) {
    if (n_points < 3) {
        throw std::invalid_argument("grid_search_power_split: n_points must be >= 3");
    }
    if (tau < 1 || tau >= t_coh || !(p_avg > 0.0)) {
        throw std::invalid_argument("grid_search_power_split: invalid budget parameters");
    }
    const double energy = static_cast<double>(t_coh) * p_avg;
    const double q_max = energy / (t_coh - tau);
    PowerSplit best{energy / tau, 0.0};
    double best_value = objective(best.p_u, best.q_u);
    for (int i = 1; i < n_points; ++i) {
        const double q_u = q_max * static_cast<double>(i) / (n_points - 1);
        const double p_u = (energy - (t_coh - tau) * q_u) / tau;
        const double value = objective(p_u, q_u);
        if (value > best_value) {
            best_value = value;
            best = {p_u, q_u};
        }
    }
    return best;
}

}  // namespace jamrx
