#pragma once

#include <algorithm>
#include <cmath>

#include "jamrx/simulate.hpp"

namespace jamrx {

/// Linear estimates of the user and jamming channels, together with the
/// deterministic estimation gains eta_u and eta_j that formed them.
struct ChannelEstimates {
    cvec h_hat;
    cvec g_hat;
    double eta_u = 0.0;
    double eta_j = 0.0;
};

/// eta_u = sqrt(tau p_u) beta_u / (tau p_u beta_u + p_j beta_j + sigma2).
/// The general MMSE gain; the unit-noise special case has sigma2 = 1.
inline double user_estimation_gain(const SystemConfig& c) {
    return std::sqrt(c.tau * c.p_u) * c.beta_u / (c.tau * c.p_u * c.beta_u + c.p_j * c.beta_j + c.sigma2);
}

/// eta_j = 1 / sqrt(p_j beta_j + sigma2).
inline double jammer_estimation_gain(const SystemConfig& c) {
    return 1.0 / std::sqrt(c.p_j * c.beta_j + c.sigma2);
}

/// y_u = Y_t s_u* = sqrt(tau p_u) h + sqrt(tau p_j) (s_j^T s_u*) g + N_t s_u*.
inline cvec correlate_user_pilot(const PilotObservation& y_t, const PilotBook& pilots) {
    const cvec& s_u = pilots.used();
    if (static_cast<std::size_t>(y_t.tau) != s_u.size()) {
        throw std::invalid_argument("correlate_user_pilot: dimension mismatch");
    }
    cvec y(static_cast<std::size_t>(y_t.m), cdouble{0.0, 0.0});
    for (int t = 0; t < y_t.tau; ++t) {
        const cdouble w = std::conj(s_u[static_cast<std::size_t>(t)]);
        const cvec& col = y_t.column(t);
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] += col[i] * w;
        }
    }
    return y;
}

/// y_j = Y_t s_ubar*; the user's pilot term cancels exactly by orthogonality.
inline cvec project_unused_pilot(const PilotObservation& y_t, const PilotBook& pilots) {
    const cvec& s_ubar = pilots.unused();
    if (static_cast<std::size_t>(y_t.tau) != s_ubar.size()) {
        throw std::invalid_argument("project_unused_pilot: dimension mismatch");
    }
    cvec y(static_cast<std::size_t>(y_t.m), cdouble{0.0, 0.0});
    for (int t = 0; t < y_t.tau; ++t) {
        const cdouble w = std::conj(s_ubar[static_cast<std::size_t>(t)]);
        const cvec& col = y_t.column(t);
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] += col[i] * w;
        }
    }
    return y;
}

/// h_hat = eta_u y_u.
inline cvec estimate_user_channel(const cvec& y_u, const SystemConfig& c) {
    const double eta = user_estimation_gain(c);
    cvec h_hat(y_u.size());
    for (std::size_t i = 0; i < y_u.size(); ++i) {
        h_hat[i] = eta * y_u[i];
    }
    return h_hat;
}

/// g_hat = eta_j y_j.
inline cvec estimate_jammer_channel(const cvec& y_j, const SystemConfig& c) {
    const double eta = jammer_estimation_gain(c);
    cvec g_hat(y_j.size());
    for (std::size_t i = 0; i < y_j.size(); ++i) {
        g_hat[i] = eta * y_j[i];
    }
    return g_hat;
}

inline ChannelEstimates estimate_channels(const PilotObservation& y_t, const PilotBook& pilots,
                                          const SystemConfig& c) {
    ChannelEstimates est;
    est.eta_u = user_estimation_gain(c);
    est.eta_j = jammer_estimation_gain(c);
    est.h_hat = estimate_user_channel(correlate_user_pilot(y_t, pilots), c);
    est.g_hat = estimate_jammer_channel(project_unused_pilot(y_t, pilots), c);
    return est;
}

/// Invert the large-M power identities
///   ||y_u||^2/M ~ tau p_u beta_u + tau p_j beta_j delta1 + sigma2
///   ||y_j||^2/M ~ tau p_j beta_j delta2 + sigma2
/// for the correlations. The raw inversion can leave the unit simplex at
/// finite M; it is what the NMSE benchmark measures, and notably keeps the
/// delta2 estimate algebraically independent of the user's pilot power.
inline DeltaPair estimate_deltas_raw(const cvec& y_u, const cvec& y_j, const SystemConfig& c) {
    const double pj_bj = c.p_j * c.beta_j;
    if (!(pj_bj > 0.0)) {
        throw std::invalid_argument(
            "estimate_deltas: requires p_j * beta_j > 0 (fall back to true or mean deltas)");
    }
    const double m = static_cast<double>(y_u.size());
    const double denom = c.tau * pj_bj;
    return {(norm2(y_u) / m - c.tau * c.p_u * c.beta_u - c.sigma2) / denom,
            (norm2(y_j) / m - c.sigma2) / denom};
}

/// Raw estimates clamped below at zero and rescaled onto delta1 + delta2 <= 1;
/// the downstream closed forms require a valid correlation pair.
inline DeltaPair estimate_deltas(const cvec& y_u, const cvec& y_j, const SystemConfig& c) {
    DeltaPair d = estimate_deltas_raw(y_u, y_j, c);
    d.delta1 = std::max(d.delta1, 0.0);
    d.delta2 = std::max(d.delta2, 0.0);
    const double sum = d.delta1 + d.delta2;
    if (sum > 1.0) {
        d.delta1 /= sum;
        d.delta2 /= sum;
    }
    return d;
}

/// The deterministic coefficients of the estimate decompositions
///   h_hat = alpha1 h + alpha2 g + n1,   g_hat = alpha3 g + n2.
/// They depend on the true s_j, so they are analysis quantities, not
/// receiver-side ones.
struct EstimationCoefficients {
    cdouble alpha1;
    cdouble alpha2;
    cdouble alpha3;
};

inline EstimationCoefficients estimation_coefficients(const SystemConfig& c, const PilotBook& pilots,
                                                      const JammerSequence& s_j) {
    const double eta_u = user_estimation_gain(c);
    const double eta_j = jammer_estimation_gain(c);
    const cdouble cu = pilot_correlation(s_j.s, pilots.used());
    const cdouble cb = pilot_correlation(s_j.s, pilots.unused());
    return {eta_u * std::sqrt(c.tau * c.p_u), eta_u * std::sqrt(c.tau * c.p_j) * cu,
            eta_j * std::sqrt(c.tau * c.p_j) * cb};
}

}  // namespace jamrx
