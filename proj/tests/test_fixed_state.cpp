#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "relaycap/fixed_state.hpp"
#include "relaycap/rng.hpp"

using namespace relaycap;

namespace {

std::array<std::complex<double>, 2> cvec(double a_re, double a_im, double b_re, double b_im) {
    return {std::complex<double>(a_re, a_im), std::complex<double>(b_re, b_im)};
}

}  // namespace

TEST_CASE("single-user degenerate instances are exactly zero") {
    CHECK(rate_single_fixed(50.0, 3.0, 0.0, 0.0).beta == 0.0);
    CHECK(rate_single_fixed(0.0, 0.0, 4.0, 7.0).beta == 0.0);
}

TEST_CASE("single-user solver matches the grid oracle") {
    const double beta = rate_single_fixed(100.0, 100.0, 2.0, 2.0).beta;
    const double oracle = oracle_grid_single(100.0, 100.0, 2.0, 2.0, 1e-3);
    CHECK(std::fabs(beta - oracle) < 5e-3);
}

TEST_CASE("specialized oracle equals the generic scan on a small box") {
    const double rho1 = 12.0, rho2 = 3.5, c1 = 1.2, c2 = 0.7, step = 0.01;
    auto objective = [&](double r1, double r2) {
        const double x1 = one_minus_exp2_neg(r1);
        const double x2 = one_minus_exp2_neg(r2);
        return detail::subset_min(rho1 * x1, rho2 * x2, 0.0, c1 - r1, c2 - r2);
    };
    const double cap = log2p1(rho1 + rho2);
    const double generic = brute_force_oracle(objective, c1 + cap, c2 + cap, step);
    const double fast = oracle_grid_single(rho1, rho2, c1, c2, step);
    CHECK(fast == doctest::Approx(generic).epsilon(1e-14));
}

TEST_CASE("generic oracle basics") {
    SUBCASE("constant objective") {
        CHECK(brute_force_oracle([](double, double) { return 1.0; }, 2.0, 2.0, 0.5) == 1.0);
    }
    SUBCASE("rejects empty boxes") {
        CHECK_THROWS_AS(brute_force_oracle([](double, double) { return 0.0; }, -1.0, 2.0, 0.5),
                        std::domain_error);
        CHECK_THROWS_AS(brute_force_oracle([](double, double) { return 0.0; }, 1.0, 2.0, 0.0),
                        std::domain_error);
    }
    SUBCASE("one-dimensional reduction matches bisection of the crossing") {
        // rho = (10, 0), c = (2, 0): optimum solves log2(1 + 10(1 - 2^-r)) = 2 - r.
        auto objective = [](double r1, double r2) {
            const double x1 = one_minus_exp2_neg(r1);
            return detail::subset_min(10.0 * x1, 0.0, 0.0, 2.0 - r1, 0.0 - r2);
        };
        const double step = 1e-4;
        const double grid = brute_force_oracle(objective, 2.0 + log2p1(10.0), 0.0, step);
        double lo = 0.0, hi = 2.0;
        for (int i = 0; i < 80; ++i) {
            const double m = 0.5 * (lo + hi);
            if (2.0 - m - log2p1(10.0 * one_minus_exp2_neg(m)) >= 0.0)
                lo = m;
            else
                hi = m;
        }
        const double crossing = 2.0 - 0.5 * (lo + hi);
        CHECK(std::fabs(grid - crossing) < 2.0 * step);
    }
    SUBCASE("refining the grid never lowers the maximum") {
        auto objective = [](double r1, double r2) {
            const double x1 = one_minus_exp2_neg(r1);
            const double x2 = one_minus_exp2_neg(r2);
            return detail::subset_min(30.0 * x1, 4.0 * x2, 0.0, 1.5 - r1, 2.5 - r2);
        };
        const double coarse = brute_force_oracle(objective, 6.0, 7.0, 0.02);
        const double fine = brute_force_oracle(objective, 6.0, 7.0, 0.01);
        CHECK(fine >= coarse - 1e-15);
    }
}

TEST_CASE("single-user solver properties over random instances") {
    Rng rng(2024);
    for (int i = 0; i < 30; ++i) {
        const double rho1 = 200.0 * rng.uniform01();
        const double rho2 = 200.0 * rng.uniform01();
        const double c1 = 12.0 * rng.uniform01();
        const double c2 = 12.0 * rng.uniform01();
        const FixedStateSolution sol = rate_single_fixed(rho1, rho2, c1, c2);

        // Bounds: 0 <= beta <= min(c1 + c2, full-cooperation log term).
        CHECK(sol.beta >= 0.0);
        CHECK(sol.beta <= c1 + c2 + 1e-9);
        CHECK(sol.beta <= log2p1(rho1 + rho2) + 1e-9);

        // Symmetry under relay swap.
        const FixedStateSolution swapped = rate_single_fixed(rho2, rho1, c2, c1);
        CHECK(std::fabs(sol.beta - swapped.beta) < 1e-6);

        // Monotonicity in SNR and capacity.
        CHECK(rate_single_fixed(rho1 * 1.5 + 0.5, rho2, c1, c2).beta >= sol.beta - 1e-7);
        CHECK(rate_single_fixed(rho1, rho2, c1 + 0.5, c2).beta >= sol.beta - 1e-7);

        // beta equals the subset minimum at the reported argmax.
        const double x1 = one_minus_exp2_neg(sol.r1);
        const double x2 = one_minus_exp2_neg(sol.r2);
        const double replay =
            detail::subset_min(rho1 * x1, rho2 * x2, 0.0, c1 - sol.r1, c2 - sol.r2);
        CHECK(sol.beta == doctest::Approx(replay).epsilon(1e-12));
        CHECK(!sol.active_subsets.empty());

        // The solver dominates every coarse feasible grid point.
        const double cap = log2p1(rho1 + rho2);
        for (double r1 = 0.0; r1 <= c1 + cap; r1 += 0.37)
            for (double r2 = 0.0; r2 <= c2 + cap; r2 += 0.41) {
                const double val = detail::subset_min(rho1 * one_minus_exp2_neg(r1),
                                                      rho2 * one_minus_exp2_neg(r2), 0.0, c1 - r1,
                                                      c2 - r2);
                CHECK(sol.beta >= val - 1e-6);
            }
    }
}

TEST_CASE("two-user degenerate instances") {
    const auto zero = cvec(0, 0, 0, 0);
    CHECK(rate_two_fixed(zero, zero, 0.5, 4.0, 4.0).beta == 0.0);
    const auto h1 = cvec(1, 0, 0, 0);
    const auto h2 = cvec(0, 0, 1, 0);
    CHECK(rate_two_fixed(h1, h2, 0.5, 0.0, 0.0).beta == 0.0);
    CHECK_THROWS_AS(rate_two_fixed(h1, h2, 0.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("two-user solver matches oracle on orthogonal states") {
    const auto h1 = cvec(1, 0, 0, 0);
    const auto h2 = cvec(0, 0, 1, 0);
    const double beta = rate_two_fixed(h1, h2, 0.1, 3.0, 3.0).beta;
    const double oracle = oracle_grid_two(h1, h2, 0.1, 3.0, 3.0, 1e-3);
    CHECK(std::fabs(beta - oracle) < 5e-3);

    // Orthogonal rank-one states make the determinant factor per relay.
    auto objective = [&](double r1, double r2) {
        return detail::subset_min(10.0 * one_minus_exp2_neg(r1), 10.0 * one_minus_exp2_neg(r2),
                                  100.0 * one_minus_exp2_neg(r1) * one_minus_exp2_neg(r2),
                                  3.0 - r1, 3.0 - r2);
    };
    const double cap = log2p1(10.0 + 10.0 + 100.0);
    const double direct = brute_force_oracle(objective, 3.0 + cap, 3.0 + cap, 0.01);
    CHECK(std::fabs(direct - beta) < 2e-2);
}

TEST_CASE("two-user solver properties over random instances") {
    Rng rng(99);
    for (int i = 0; i < 12; ++i) {
        TwoUserSample s;
        s.h1 = {rng.cnormal(1.0), rng.cnormal(1.0)};
        s.h2 = {rng.cnormal(1.0), rng.cnormal(1.0)};
        const double sigma2 = 0.05 + rng.uniform01();
        const double c1 = 8.0 * rng.uniform01();
        const double c2 = 8.0 * rng.uniform01();
        const FixedStateSolution sol = rate_two_fixed(s.h1, s.h2, sigma2, c1, c2);
        CHECK(sol.beta >= 0.0);
        CHECK(sol.beta <= c1 + c2 + 1e-9);
        const FixedStateSolution swapped = rate_two_fixed(s.h2, s.h1, sigma2, c2, c1);
        CHECK(std::fabs(sol.beta - swapped.beta) < 1e-6);
        CHECK(rate_two_fixed(s.h1, s.h2, sigma2, c1 + 1.0, c2).beta >= sol.beta - 1e-7);
    }
}
