#pragma once

#include "jamrx/estimate.hpp"

namespace jamrx {

struct ReceiveFilter {
    cvec a;
    ReceiverSpec spec;
};

/// Maximal ratio combining: a = h_hat.
inline ReceiveFilter mrc_filter(const ChannelEstimates& est) {
    return {est.h_hat, {ReceiverKind::mrc, 0.0}};
}

namespace detail {

// a = h_hat - g_hat (g_hat^H h_hat) / (mu + ||g_hat||^2), the scale-equivalent
// rank-one form of the RZF filter. O(M), no matrix inverse, and stable at
// mu = 0 where the 1/mu form blows up.
inline cvec project_against(const cvec& h_hat, const cvec& g_hat, double mu) {
    const cdouble coef = vdot(g_hat, h_hat) / (mu + norm2(g_hat));
    cvec a(h_hat.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = h_hat[i] - coef * g_hat[i];
    }
    return a;
}

}  // namespace detail

/// ZF-type receiver: project h_hat on the orthogonal complement of g_hat.
/// A vanishing g_hat is a probability-zero event; fall back to MRC rather
/// than divide by zero.
inline ReceiveFilter zf_filter(const ChannelEstimates& est) {
    if (norm2(est.g_hat) < 1e-30) {
        return {est.h_hat, {ReceiverKind::zf, 0.0}};
    }
    return {detail::project_against(est.h_hat, est.g_hat, 0.0), {ReceiverKind::zf, 0.0}};
}

/// Regularized ZF with regularization factor mu >= 0; mu = 0 is the ZF-type
/// receiver.
inline ReceiveFilter rzf_filter(const ChannelEstimates& est, double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("rzf_filter: mu must be finite and >= 0");
    }
    if (mu == 0.0) {
        ReceiveFilter f = zf_filter(est);
        f.spec = {ReceiverKind::rzf, 0.0};
        return f;
    }
    return {detail::project_against(est.h_hat, est.g_hat, mu), {ReceiverKind::rzf, mu}};
}

/// Regularization factor of the MMSE-type receiver, mu = sigma_e^2 / q_j,
/// where sigma_e^2 is the variance of the estimation-error-plus-noise signal.
inline double mmse_mu(const SystemConfig& c) {
    if (!(c.q_j > 0.0)) {
        throw std::invalid_argument("mmse_mu: undefined for q_j = 0 (use MRC or ZF)");
    }
    const double eta_u = user_estimation_gain(c);
    const double eta_j2 = 1.0 / (c.p_j * c.beta_j + c.sigma2);
    const double sigma_e2 = c.q_u * c.beta_u * (1.0 - eta_u * std::sqrt(c.tau * c.p_u)) +
                            c.q_j * (c.beta_j * (1.0 + eta_j2 * c.p_j) + eta_j2 * c.sigma2) +
                            c.sigma2;
    return sigma_e2 / c.q_j;
}

inline ReceiveFilter mmse_filter(const ChannelEstimates& est, const SystemConfig& c) {
    ReceiveFilter f = rzf_filter(est, mmse_mu(c));
    f.spec = {ReceiverKind::mmse, f.spec.mu};
    return f;
}

inline ReceiveFilter build_filter(const ChannelEstimates& est, const ReceiverSpec& spec,
                                  const SystemConfig& c) {
    switch (spec.kind) {
        case ReceiverKind::mrc: return mrc_filter(est);
        case ReceiverKind::zf: return zf_filter(est);
        case ReceiverKind::mmse: return mmse_filter(est, c);
        case ReceiverKind::rzf: return rzf_filter(est, spec.mu);
    }
    throw std::invalid_argument("build_filter: unknown receiver kind");
}

/// y = a^H y_d.
inline cdouble apply_filter(const ReceiveFilter& filter, const DataObservation& obs) {
    if (filter.a.size() != obs.y_d.size()) {
        throw std::invalid_argument("apply_filter: dimension mismatch");
    }
    return vdot(filter.a, obs.y_d);
}

}  // namespace jamrx
