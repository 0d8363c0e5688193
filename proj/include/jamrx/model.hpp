#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "jamrx/linalg.hpp"
#include "jamrx/rng.hpp"

namespace jamrx {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Scalar parameters of the single-user uplink with a jammer: M base-station
/// antennas, coherence block of t_coh symbols split into a tau-symbol pilot
/// phase and a data phase, Rayleigh fading variances, noise variance, and the
/// per-symbol transmit powers of the user (p_u pilot, q_u data) and the
/// jammer (p_j pilot, q_j data).
struct SystemConfig {
    int m = 100;
    int t_coh = 200;
    int tau = 3;
    double beta_u = 1.0;
    double beta_j = 1.0;
    double sigma2 = 1.0;
    double p_u = 1.0;
    double q_u = 1.0;
    double p_j = 1.0;
    double q_j = 1.0;
};

inline std::vector<std::string> validate_config(const SystemConfig& c) {
    std::vector<std::string> errors;
    auto positive = [&](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0)) {
            errors.push_back(std::string(name) + " must be finite and > 0");
        }
    };
    auto nonneg = [&](double v, const char* name) {
        if (!(std::isfinite(v) && v >= 0.0)) {
            errors.push_back(std::string(name) + " must be finite and >= 0");
        }
    };
    if (c.m < 1) errors.emplace_back("m must be a positive integer");
    if (c.tau < 2) errors.emplace_back("tau must be >= 2 (one used and one unused pilot)");
    if (c.t_coh < 1) errors.emplace_back("t_coh must be a positive integer");
    if (c.tau >= c.t_coh) errors.emplace_back("tau must be < t_coh (pre-log factor must be positive)");
    positive(c.beta_u, "beta_u");
    positive(c.beta_j, "beta_j");
    positive(c.sigma2, "sigma2");
    nonneg(c.p_u, "p_u");
    nonneg(c.q_u, "q_u");
    nonneg(c.p_j, "p_j");
    nonneg(c.q_j, "q_j");
    return errors;
}

inline void require_valid(const SystemConfig& c) {
    const auto errors = validate_config(c);
    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) {
            msg += "\n  - " + e;
        }
        throw ConfigError(msg);
    }
}

/// tau orthonormal pilot sequences plus the indices of the pilot assigned to
/// the user and of the deliberately unused one.
struct PilotBook {
    std::vector<cvec> sequences;
    int used_index = 0;
    int unused_index = 1;

    const cvec& used() const { return sequences[static_cast<std::size_t>(used_index)]; }
    const cvec& unused() const { return sequences[static_cast<std::size_t>(unused_index)]; }
};

/// Unit-norm DFT columns: a canonical orthonormal codebook.
inline PilotBook make_pilot_book(int tau, int used_index, int unused_index) {
    if (tau < 2) {
        throw ConfigError("make_pilot_book: tau must be >= 2 so an unused pilot exists");
    }
    if (used_index < 0 || used_index >= tau || unused_index < 0 || unused_index >= tau ||
        used_index == unused_index) {
        throw ConfigError("make_pilot_book: pilot indices must be distinct and in [0, tau)");
    }
    PilotBook book;
    book.used_index = used_index;
    book.unused_index = unused_index;
    book.sequences.resize(static_cast<std::size_t>(tau));
    const double scale = 1.0 / std::sqrt(static_cast<double>(tau));
    for (int k = 0; k < tau; ++k) {
        cvec s(static_cast<std::size_t>(tau));
        for (int n = 0; n < tau; ++n) {
            const double phase = -2.0 * std::numbers::pi * k * n / tau;
            s[static_cast<std::size_t>(n)] = scale * cdouble{std::cos(phase), std::sin(phase)};
        }
        book.sequences[static_cast<std::size_t>(k)] = std::move(s);
    }
    return book;
}

struct JammerSequence {
    cvec s;
};

/// Uniform on the complex unit sphere: i.i.d. CN(0,1) entries, normalized.
inline JammerSequence sample_jammer_sequence(int tau, PhiloxRng& rng) {
    if (tau < 1) {
        throw ConfigError("sample_jammer_sequence: tau must be >= 1");
    }
    cvec s(static_cast<std::size_t>(tau));
    double n2 = 0.0;
    do {
        rng.fill_complex_normal(s, 1.0);
        n2 = norm2(s);
    } while (n2 <= 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    for (cdouble& x : s) {
        x *= inv;
    }
    return {std::move(s)};
}

/// One block-fading draw of the user channel h and the jamming channel g.
struct ChannelRealization {
    cvec h;
    cvec g;
};

inline ChannelRealization sample_channels(const SystemConfig& c, PhiloxRng& rng) {
    require_valid(c);
    ChannelRealization ch;
    ch.h.resize(static_cast<std::size_t>(c.m));
    ch.g.resize(static_cast<std::size_t>(c.m));
    rng.fill_complex_normal(ch.h, c.beta_u);
    rng.fill_complex_normal(ch.g, c.beta_j);
    return ch;
}

enum class ReceiverKind { mrc, zf, mmse, rzf };

struct ReceiverSpec {
    ReceiverKind kind = ReceiverKind::zf;
    double mu = 0.0;  // regularization factor, meaningful for rzf only
};

inline std::string receiver_name(const ReceiverSpec& spec) {
    switch (spec.kind) {
        case ReceiverKind::mrc: return "mrc";
        case ReceiverKind::zf: return "zf";
        case ReceiverKind::mmse: return "mmse";
        case ReceiverKind::rzf: return "rzf";
    }
    return "?";
}

/// Squared correlations of the jamming sequence with the used pilot (delta1)
/// and the unused pilot (delta2). On an orthonormal codebook they satisfy
/// delta1 + delta2 <= 1.
struct DeltaPair {
    double delta1 = 0.0;
    double delta2 = 0.0;
};

/// s_j^T s* -- the correlation the pilot-phase algebra is written in.
inline cdouble pilot_correlation(const cvec& s_j, const cvec& s) {
    return tdot(s_j, s);
}

inline DeltaPair deltas_for(const JammerSequence& s_j, const PilotBook& pilots) {
    return {std::norm(pilot_correlation(s_j.s, pilots.used())),
            std::norm(pilot_correlation(s_j.s, pilots.unused()))};
}

}  // namespace jamrx
