#pragma once

#include <cmath>
#include <optional>

#include "jamrx/model.hpp"

namespace jamrx {

/// Stacked pilot-phase receive matrix Y_t (m rows, tau columns), stored
/// column-wise.
struct PilotObservation {
    int m = 0;
    int tau = 0;
    std::vector<cvec> columns;

    const cvec& column(int t) const { return columns[static_cast<std::size_t>(t)]; }
};

/// One data-phase receive vector together with the symbols that produced it.
struct DataObservation {
    cvec y_d;
    cdouble x_u{0.0, 0.0};
    cdouble x_j{0.0, 0.0};
};

/// Test hooks: unit tests force sigma2 -> 0 or pin the data symbols to make
/// the algebra exact. The CLI never sets these.
struct PhaseOptions {
    bool disable_noise = false;
    std::optional<cdouble> force_x_u;
    std::optional<cdouble> force_x_j;
};

/// Y_t = sqrt(tau p_u) h s_u^T + sqrt(tau p_j) g s_j^T + N_t,
/// N_t with i.i.d. CN(0, sigma2) entries.
inline PilotObservation pilot_phase(const SystemConfig& c, const PilotBook& pilots,
                                    const JammerSequence& s_j, const ChannelRealization& ch,
                                    PhiloxRng& rng, const PhaseOptions& opts = {}) {
    require_valid(c);
    const auto m = static_cast<std::size_t>(c.m);
    if (ch.h.size() != m || ch.g.size() != m ||
        pilots.used().size() != static_cast<std::size_t>(c.tau) ||
        s_j.s.size() != static_cast<std::size_t>(c.tau)) {
        throw std::invalid_argument("pilot_phase: dimension mismatch");
    }
    const cvec& s_u = pilots.used();
    const double au = std::sqrt(c.tau * c.p_u);
    const double aj = std::sqrt(c.tau * c.p_j);

    PilotObservation obs;
    obs.m = c.m;
    obs.tau = c.tau;
    obs.columns.resize(static_cast<std::size_t>(c.tau));
    for (int t = 0; t < c.tau; ++t) {
        cvec col(m);
        const cdouble cu = au * s_u[static_cast<std::size_t>(t)];
        const cdouble cj = aj * s_j.s[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < m; ++i) {
            cdouble v = cu * ch.h[i] + cj * ch.g[i];
            if (!opts.disable_noise) {
                v += rng.complex_normal(c.sigma2);
            }
            col[i] = v;
        }
        obs.columns[static_cast<std::size_t>(t)] = std::move(col);
    }
    return obs;
}

/// y_d = sqrt(q_u) h x_u + sqrt(q_j) g x_j + n_d, with unit-power complex
/// Gaussian symbols x_u, x_j.
inline DataObservation data_phase(const SystemConfig& c, const ChannelRealization& ch,
                                  PhiloxRng& rng, const PhaseOptions& opts = {}) {
    require_valid(c);
    const auto m = static_cast<std::size_t>(c.m);
    if (ch.h.size() != m || ch.g.size() != m) {
        throw std::invalid_argument("data_phase: dimension mismatch");
    }
    DataObservation obs;
    obs.x_u = opts.force_x_u ? *opts.force_x_u : rng.complex_normal(1.0);
    obs.x_j = opts.force_x_j ? *opts.force_x_j : rng.complex_normal(1.0);
    const double su = std::sqrt(c.q_u);
    const double sj = std::sqrt(c.q_j);
    obs.y_d.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        cdouble v = su * ch.h[i] * obs.x_u + sj * ch.g[i] * obs.x_j;
        if (!opts.disable_noise) {
            v += rng.complex_normal(c.sigma2);
        }
        obs.y_d[i] = v;
    }
    return obs;
}

}  // namespace jamrx
