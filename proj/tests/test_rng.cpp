#include <catch2/catch_amalgamated.hpp>

#include "jamrx/model.hpp"
#include "jamrx/rng.hpp"

using namespace jamrx;

TEST_CASE("philox4x32-10 known-answer vectors") {
    using philox::Counter;
    using philox::Key;
    // Reference vectors from the Random123 distribution (kat_vectors).
    CHECK(philox::bijection_10(Counter{0, 0, 0, 0}, Key{0, 0}) ==
          Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox::bijection_10(Counter{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               Key{0xffffffffu, 0xffffffffu}) ==
          Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox::bijection_10(Counter{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                               Key{0xa4093822u, 0x299f31d0u}) ==
          Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are deterministic and distinct") {
    PhiloxRng a(42, StreamDomain::trial, 3, 7);
    PhiloxRng b(42, StreamDomain::trial, 3, 7);
    for (int i = 0; i < 100; ++i) {
        REQUIRE(a.next_u32() == b.next_u32());
    }

    PhiloxRng c(42, StreamDomain::trial, 3, 8);
    PhiloxRng d(42, StreamDomain::jammer_draw, 3, 7);
    PhiloxRng e(43, StreamDomain::trial, 3, 7);
    PhiloxRng base(42, StreamDomain::trial, 3, 7);
    const std::uint64_t x = base.next_u64();
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
    CHECK(x != e.next_u64());
}

TEST_CASE("uniform and normal moments") {
    PhiloxRng rng(7, StreamDomain::generic);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    CHECK_THAT(sum / n, Catch::Matchers::WithinAbs(0.5, 5e-3));
    CHECK_THAT(sum2 / n, Catch::Matchers::WithinAbs(1.0 / 3.0, 5e-3));

    double nsum = 0.0, nsum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        nsum += z;
        nsum2 += z * z;
    }
    CHECK_THAT(nsum / n, Catch::Matchers::WithinAbs(0.0, 1e-2));
    CHECK_THAT(nsum2 / n, Catch::Matchers::WithinAbs(1.0, 2e-2));
}

TEST_CASE("complex normal variance") {
    PhiloxRng rng(11, StreamDomain::generic);
    const int n = 200000;
    const double var = 2.5;
    double p = 0.0;
    cdouble mean{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const cdouble z = rng.complex_normal(var);
        p += std::norm(z);
        mean += z;
    }
    CHECK_THAT(p / n, Catch::Matchers::WithinRel(var, 2e-2));
    CHECK(std::abs(mean / static_cast<double>(n)) < 0.02);
}

TEST_CASE("jammer sequence is unit norm and calibrated") {
    const int tau = 3;
    PhiloxRng rng(123, StreamDomain::jammer_draw);
    const PilotBook book = make_pilot_book(tau, 0, 1);

    double sum_d1 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const JammerSequence s_j = sample_jammer_sequence(tau, rng);
        REQUIRE_THAT(norm2(s_j.s), Catch::Matchers::WithinAbs(1.0, 1e-12));
        // Parseval: correlations against the full orthonormal codebook sum to 1.
        double total = 0.0;
        for (const cvec& s : book.sequences) {
            total += std::norm(pilot_correlation(s_j.s, s));
        }
        REQUIRE_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-12));
        sum_d1 += deltas_for(s_j, book).delta1;
    }
    CHECK_THAT(sum_d1 / n, Catch::Matchers::WithinRel(1.0 / tau, 0.02));
}

TEST_CASE("jammer sequence rejects tau < 1") {
    PhiloxRng rng(1, StreamDomain::generic);
    CHECK_THROWS_AS(sample_jammer_sequence(0, rng), ConfigError);
}
