#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "jamrx/linalg.hpp"

namespace jamrx {

// Philox 4x32-10 counter-based generator (Salmon et al., SC'11). Every random
// quantity in the project is a pure function of (seed, domain, a, b, position),
// which is what makes parallel runs reproducible under any schedule.

namespace philox {

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline Counter round_once(const Counter& c, const Key& k) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
            static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
            static_cast<std::uint32_t>(p0)};
}

inline Counter bijection_10(Counter c, Key k) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        c = round_once(c, k);
    }
    return c;
}

}  // namespace philox

/// Stream domains keep the substreams used by different operations disjoint.
enum class StreamDomain : std::uint32_t {
    generic = 0,
    jammer_draw = 1,   // sampling s_j for draw index a
    trial = 2,         // Monte Carlo trial b of jamming draw a
    nmse = 3,          // delta-estimation runs (a = antenna-count index, b = run)
    closed_rate = 4,   // pilot observations behind estimated-delta closed-form rates
};

/// One independent random stream: key = 64-bit seed, counter = (block, b, a, domain).
class PhiloxRng {
  public:
    PhiloxRng(std::uint64_t seed, StreamDomain domain, std::uint32_t a = 0, std::uint32_t b = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, b, a, static_cast<std::uint32_t>(domain)} {}

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            block_ = philox::bijection_10(ctr_, key_);
            ++ctr_[0];
            pos_ = 0;
        }
        return block_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe to pass through log().
    double uniform01_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform01_pos()));
        const double t = 2.0 * std::numbers::pi * uniform01();
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Circularly-symmetric complex Gaussian CN(0, variance).
    cdouble complex_normal(double variance) {
        const double r = std::sqrt(-variance * std::log(uniform01_pos()));
        const double t = 2.0 * std::numbers::pi * uniform01();
        return {r * std::cos(t), r * std::sin(t)};
    }

    void fill_complex_normal(cvec& out, double variance) {
        for (cdouble& x : out) {
            x = complex_normal(variance);
        }
    }

  private:
    philox::Key key_;
    philox::Counter ctr_;
    philox::Counter block_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace jamrx
