#include <catch2/catch_amalgamated.hpp>

#include "jamrx/powerctl.hpp"

using namespace jamrx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const DeltaPair kThirds{1.0 / 3.0, 1.0 / 3.0};

SystemConfig hand_config() {
    SystemConfig c;
    c.m = 100;
    c.tau = 3;
    c.t_coh = 200;
    return c;  // p_j = q_j = 1, beta = sigma2 = 1
}

double budget_energy(const PowerSplit& s, int t_coh, int tau) {
    return tau * s.p_u + (t_coh - tau) * s.q_u;
}

}  // namespace

TEST_CASE("asymptotic split halves the block energy") {
    const PowerSplit s = asymptotic_power_split(200, 3, 1.0);
    CHECK_THAT(s.p_u, WithinAbs(200.0 / 6.0, 1e-9));
    CHECK_THAT(s.q_u, WithinAbs(200.0 / 394.0, 1e-9));
    CHECK_THAT(3 * s.p_u, WithinAbs(100.0, 1e-9));
    CHECK_THAT(197 * s.q_u, WithinAbs(100.0, 1e-9));

    SECTION("tau = T/2 splits evenly") {
        const PowerSplit half = asymptotic_power_split(100, 50, 2.5);
        CHECK_THAT(half.p_u, WithinAbs(2.5, 1e-12));
        CHECK_THAT(half.q_u, WithinAbs(2.5, 1e-12));
    }

    SECTION("invalid budget parameters") {
        CHECK_THROWS_AS(asymptotic_power_split(200, 200, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(asymptotic_power_split(200, 3, 0.0), std::invalid_argument);
    }
}

TEST_CASE("finite-M optimal split: hand instance") {
    const SystemConfig c = hand_config();
    CHECK_THAT(allocation_nu(c, kThirds), WithinAbs(26.5, 1e-12));
    const PowerSplit s = optimal_power_split_zf(c, kThirds, 1.0);
    CHECK_THAT(s.p_u, WithinAbs(16.9914, 1e-4));
    CHECK_THAT(s.q_u, WithinAbs(0.756470, 1e-5));
    CHECK_THAT(budget_energy(s, c.t_coh, c.tau), WithinRel(200.0, 1e-9));
}

TEST_CASE("optimal split maximizes the zf closed form on the budget line") {
    const SystemConfig base = hand_config();
    const double p_avg = 1.0;
    const PowerSplit closed = optimal_power_split_zf(base, kThirds, p_avg);
    auto objective = [&](double p_u, double q_u) {
        SystemConfig c = base;
        c.p_u = p_u;
        c.q_u = q_u;
        return rho_zf_closed(c, kThirds);
    };
    const PowerSplit grid = grid_search_power_split(objective, base.t_coh, base.tau, p_avg, 10000);
    const double step = base.t_coh * p_avg / (base.t_coh - base.tau) / 9999.0;
    CHECK(std::abs(grid.q_u - closed.q_u) <= step + 1e-12);
    // The oracle never beats the closed form beyond grid resolution.
    CHECK(objective(grid.p_u, grid.q_u) <= objective(closed.p_u, closed.q_u) + 1e-9);
}

TEST_CASE("suboptimal split substitutes mean correlations") {
    const SystemConfig c = hand_config();

    SECTION("nu with delta = 1/tau reproduces nu_tilde") {
        CHECK_THAT(allocation_nu(c, kThirds), WithinRel(allocation_nu_mean(c), 1e-12));
        const PowerSplit sub = suboptimal_power_split(c, 1.0);
        const PowerSplit opt = optimal_power_split_zf(c, kThirds, 1.0);
        CHECK_THAT(sub.p_u, WithinRel(opt.p_u, 1e-12));
        CHECK_THAT(sub.q_u, WithinRel(opt.q_u, 1e-12));
    }

    SECTION("general tau: substituting 1/tau into nu gives nu_tilde") {
        SystemConfig cc = c;
        cc.tau = 5;
        cc.p_j = 2.5;
        cc.q_j = 0.7;
        const DeltaPair mean{1.0 / cc.tau, 1.0 / cc.tau};
        CHECK_THAT(allocation_nu(cc, mean), WithinRel(allocation_nu_mean(cc), 1e-12));
    }

    SECTION("M -> infinity recovers the asymptotic split") {
        SystemConfig big = c;
        big.m = 1000000000;
        const PowerSplit sub = suboptimal_power_split(big, 1.0);
        const PowerSplit asy = asymptotic_power_split(big.t_coh, big.tau, 1.0);
        CHECK_THAT(sub.p_u, WithinRel(asy.p_u, 1e-3));
        CHECK_THAT(sub.q_u, WithinRel(asy.q_u, 1e-3));
    }
}

TEST_CASE("both closed-form splits exhaust the budget") {
    PhiloxRng rng(404, StreamDomain::generic);
    for (int i = 0; i < 200; ++i) {
        SystemConfig c;
        c.m = 10 + static_cast<int>(rng.uniform01() * 500);
        c.tau = 2 + static_cast<int>(rng.uniform01() * 5);
        c.t_coh = 50 + static_cast<int>(rng.uniform01() * 300);
        c.beta_u = 0.1 + rng.uniform01() * 5.0;
        c.beta_j = 0.1 + rng.uniform01() * 5.0;
        c.sigma2 = 0.1 + rng.uniform01() * 5.0;
        c.p_j = rng.uniform01() * 10.0;
        c.q_j = rng.uniform01() * 10.0;
        const double p_avg = 0.1 + rng.uniform01() * 10.0;
        const double energy = c.t_coh * p_avg;
        const PilotBook book = make_pilot_book(c.tau, 0, 1);
        const DeltaPair d = deltas_for(sample_jammer_sequence(c.tau, rng), book);
        REQUIRE_THAT(budget_energy(optimal_power_split_zf(c, d, p_avg), c.t_coh, c.tau),
                     WithinRel(energy, 1e-9));
        REQUIRE_THAT(budget_energy(suboptimal_power_split(c, p_avg), c.t_coh, c.tau),
                     WithinRel(energy, 1e-9));
    }
}

TEST_CASE("objective dominance among the splits") {
    // optimal_power_split_zf maximizes the true-delta objective on the budget
    // line, so it dominates both other splits instance by instance. The
    // suboptimal split only targets the mean-delta objective: against the
    // asymptotic split it wins for most draws of s_j but can lose on atypical
    // correlations, so that comparison is a win-rate, not an invariant.
    PhiloxRng rng(505, StreamDomain::generic);
    int informative = 0;
    int sub_wins = 0;
    for (int i = 0; i < 200; ++i) {
        SystemConfig c;
        c.m = 20 + static_cast<int>(rng.uniform01() * 480);
        c.tau = 2 + static_cast<int>(rng.uniform01() * 5);
        c.t_coh = 50 + static_cast<int>(rng.uniform01() * 300);
        c.beta_u = 0.2 + rng.uniform01() * 3.0;
        c.beta_j = 0.2 + rng.uniform01() * 3.0;
        c.sigma2 = 0.2 + rng.uniform01() * 3.0;
        c.p_j = 0.1 + rng.uniform01() * 10.0;
        c.q_j = 0.1 + rng.uniform01() * 10.0;
        const double p_avg = 0.1 + rng.uniform01() * 5.0;
        const PilotBook book = make_pilot_book(c.tau, 0, 1);
        const DeltaPair d = deltas_for(sample_jammer_sequence(c.tau, rng), book);
        auto value = [&](const PowerSplit& s) {
            SystemConfig cc = c;
            cc.p_u = s.p_u;
            cc.q_u = s.q_u;
            return rho_zf_closed(cc, d);
        };
        const double v_opt = value(optimal_power_split_zf(c, d, p_avg));
        const double v_sub = value(suboptimal_power_split(c, p_avg));
        const double v_asy = value(asymptotic_power_split(c.t_coh, c.tau, p_avg));
        REQUIRE(v_opt >= v_sub * (1.0 - 1e-12));
        REQUIRE(v_opt >= v_asy * (1.0 - 1e-12));
        if (v_sub >= v_asy) ++sub_wins;
        if (v_opt > v_sub * (1.0 + 1e-9)) ++informative;
    }
    CHECK(informative > 100);  // true delta usually differs from 1/tau
    CHECK(sub_wins > 120);

    // At the Fig.-6-style operating point the suboptimal split beats the
    // asymptotic one in expectation over s_j.
    SystemConfig c = hand_config();
    const double p = std::pow(10.0, 0.5);
    c.p_j = c.q_j = p;
    const PilotBook book = make_pilot_book(c.tau, 0, 1);
    const PowerSplit sub = suboptimal_power_split(c, p);
    const PowerSplit asy = asymptotic_power_split(c.t_coh, c.tau, p);
    PhiloxRng sj_rng(606, StreamDomain::generic);
    double sum_sub = 0.0, sum_asy = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const DeltaPair d = deltas_for(sample_jammer_sequence(c.tau, sj_rng), book);
        SystemConfig cs = c;
        cs.p_u = sub.p_u;
        cs.q_u = sub.q_u;
        sum_sub += achievable_rate(rho_zf_closed(cs, d), c.tau, c.t_coh);
        cs.p_u = asy.p_u;
        cs.q_u = asy.q_u;
        sum_asy += achievable_rate(rho_zf_closed(cs, d), c.tau, c.t_coh);
    }
    CHECK(sum_sub > sum_asy);
}

TEST_CASE("grid search oracle details") {
    SECTION("product objective matches the asymptotic split within a step") {
        const PowerSplit closed = asymptotic_power_split(200, 3, 1.0);
        const PowerSplit grid = grid_search_power_split(
            [](double p, double q) { return p * q; }, 200, 3, 1.0, 10000);
        const double step = 200.0 / 197.0 / 9999.0;
        CHECK(std::abs(grid.q_u - closed.q_u) <= step + 1e-12);
    }

    SECTION("constant objective keeps the first grid point") {
        const PowerSplit grid = grid_search_power_split(
            [](double, double) { return 1.0; }, 200, 3, 1.0, 100);
        CHECK(grid.q_u == 0.0);
        CHECK_THAT(grid.p_u, WithinRel(200.0 / 3.0, 1e-12));
    }

    SECTION("rejects degenerate grids") {
        CHECK_THROWS_AS(grid_search_power_split([](double, double) { return 0.0; }, 200, 3, 1.0, 2),
                        std::invalid_argument);
    }
}
