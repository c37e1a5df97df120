#include <cmath>

#include "doctest.h"
#include "relaycap/bounds.hpp"
#include "relaycap/fc.hpp"

using namespace relaycap;

TEST_CASE("state rate-distortion cost") {
    CHECK(rd_bits(1.0) == 0.0);
    CHECK(rd_bits(0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(rd_bits(0.001) == doctest::Approx(2.0 * std::log2(1000.0)).epsilon(1e-12));
    CHECK_THROWS_AS(rd_bits(0.0), std::domain_error);
    CHECK_THROWS_AS(rd_bits(-0.2), std::domain_error);
    CHECK_THROWS_AS(rd_bits(1.5), std::domain_error);
}

TEST_CASE("single-relay compression rate") {
    SUBCASE("degenerate inputs") {
        CHECK(fc_single_relay_r(10.0, -1.0, 0.1, 0.01) == 0.0);
        CHECK(fc_single_relay_r(10.0, 0.0, 0.1, 0.01) == 0.0);
        CHECK(fc_single_relay_r(0.0, 5.0, 0.1, 0.01) == 0.0);
        CHECK_THROWS_AS(fc_single_relay_r(-1.0, 5.0, 0.1, 0.01), std::domain_error);
    }
    SUBCASE("bisection matches a fine grid argmax") {
        const double z = 10.0, c_eff = 5.0, d = 0.1, s2 = 0.01;
        const double gain = z / (2.0 * d + s2);
        auto value = [&](double r) {
            return std::min(c_eff - r, log2p1(one_minus_exp2_neg(r) * gain));
        };
        double grid_best = -kInf, grid_arg = 0.0;
        for (double r = 0.0; r <= c_eff; r += 1e-4) {
            const double v = value(r);
            if (v > grid_best) {
                grid_best = v;
                grid_arg = r;
            }
        }
        const double r_star = fc_single_relay_r(z, c_eff, d, s2);
        CHECK(std::fabs(value(r_star) - grid_best) < 1e-3);
        CHECK(std::fabs(r_star - grid_arg) < 1e-3);
        CHECK(r_star >= 0.0);
        CHECK(r_star <= c_eff);
    }
}

TEST_CASE("fronthaul-compression rate") {
    SUBCASE("full distortion silences the state and the signal") {
        NetworkParams p = NetworkParams::from_snr_db(20.0, 20.0, 20.0);
        const MCEstimate est = fc_rate(p, 1.0, 200, 4);
        CHECK(est.mean == 0.0);
    }
    SUBCASE("state description beyond the fronthaul gives exactly zero") {
        // rd_bits(0.001) = 19.93 bits; with C = 19 both relays fall silent.
        NetworkParams p = NetworkParams::from_snr_db(20.0, 19.0, 19.0);
        const MCEstimate est = fc_rate(p, 0.001, 500, 4);
        CHECK(est.mean == 0.0);
        CHECK(fc_config(p, 0.001).c_eff1 < 0.0);
    }
    SUBCASE("a nearly consumed fronthaul leaves only a sliver of rate") {
        // At C = 20 the state costs 19.93 bits, so 0.07 bits remain per relay.
        NetworkParams p = NetworkParams::from_snr_db(20.0, 20.0, 20.0);
        const MCEstimate est = fc_rate(p, 0.001, 20000, 4);
        CHECK(fc_config(p, 0.001).c_eff1 > 0.0);
        CHECK(est.mean > 0.0);
        CHECK(est.mean < 0.3);
    }
    SUBCASE("per-sample value is capped by the residual fronthaul sum") {
        NetworkParams p = NetworkParams::from_snr_db(20.0, 8.0, 8.0);
        const FcConfig cfg = fc_config(p, 0.1);
        const double cap = std::max(0.0, cfg.c_eff1) + std::max(0.0, cfg.c_eff2);
        Rng rng(55);
        for (int i = 0; i < 2000; ++i) {
            const double v = fc_sample_value(p, cfg, sample_fc_state(rng, 0.1));
            CHECK(v >= 0.0);
            CHECK(v <= cap + 1e-9);
        }
    }
    SUBCASE("ordered below the two-user cooperative bound") {
        for (double snr_db : {10.0, 20.0}) {
            NetworkParams p = NetworkParams::from_snr_db(snr_db, 40.0, 40.0);
            const double ub = coop_ub(p.sigma2, p.csum(), Network::kTwoUser).rate;
            for (double d : {0.001, 0.01, 0.1, 0.5}) {
                const MCEstimate est = fc_rate(p, d, 20000, 6);
                CHECK(est.mean <= ub + 3.0 * est.std_err);
            }
        }
    }
}

TEST_CASE("distortion selection") {
    SUBCASE("singleton grid") {
        NetworkParams p = NetworkParams::from_snr_db(20.0, 20.0, 20.0);
        const FcBest best = fc_best_d(p, {1.0}, 500, 3);
        CHECK(best.d == 1.0);
        CHECK(best.rate == 0.0);
        CHECK_THROWS_AS(fc_best_d(p, {}, 500, 3), std::invalid_argument);
    }
    SUBCASE("interior argmax when the fronthaul cannot afford fine state description") {
        // C = 20 at 10 dB: the smallest grid distortion consumes nearly the
        // whole link while d = 1 kills the signal, so the optimum is interior.
        NetworkParams p = NetworkParams::from_snr_db(10.0, 20.0, 20.0);
        const std::vector<double> grid = fc_default_d_grid();
        const FcBest best = fc_best_d(p, grid, 30000, 8);
        CHECK(best.d > grid.front());
        CHECK(best.d < grid.back());
        CHECK(best.rate > 1.0);
    }
    SUBCASE("argmax stable when trials double") {
        NetworkParams p = NetworkParams::from_snr_db(10.0, 20.0, 20.0);
        const std::vector<double> grid = fc_default_d_grid();
        const FcBest a = fc_best_d(p, grid, 20000, 8);
        const FcBest b = fc_best_d(p, grid, 40000, 8);
        double ratio = a.d / b.d;
        if (ratio < 1.0) ratio = 1.0 / ratio;
        const double grid_step = grid[1] / grid[0];
        CHECK(ratio <= grid_step * 1.0001);
    }
}
