#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "relaycap/common.hpp"
#include "relaycap/model.hpp"
#include "relaycap/opt.hpp"

// Fixed-channel-state max-min rate programs for the two-relay network.
//
// Single user: maximize beta subject to, for every subset T of {1,2},
//   log2[1 + sum_{k in T^c} rho_k (1 - 2^{-r_k})] + sum_{k in T} (c_k - r_k) >= beta,
//   r_k >= 0.
// Two users: the log term becomes log2 det[I2 + sum_{k in T^c} (1 - 2^{-r_k}) h_k h_k^H / sigma^2].
//
// Each constraint LHS is concave in (r1, r2), so the pointwise min over the
// four subsets is concave and nested golden-section over a box is exact up to
// tolerance. The search box r_k <= c_k + full-cooperation log term is a
// dominance bound: past it the subsets containing k always bind below optimum.

namespace relaycap {

struct FixedStateSolution {
    double r1 = 0.0;
    double r2 = 0.0;
    double beta = 0.0;
    // Subsets binding at the optimum, as bitmasks (bit0: relay 1 in T, bit1: relay 2).
    std::vector<int> active_subsets;
};

inline constexpr double kSolverTol = 1e-6;  // bits

namespace detail {

// min over the four subset objectives; t_k = rho_k * (1 - 2^{-r_k}),
// d_k = c_k - r_k, cross = x1 * x2 * q for the two-user determinant (0 for
// single user, where the state matrix has rank one).
inline double subset_min(double t1, double t2, double cross, double d1, double d2) {
    const double f0 = log2p1(t1 + t2 + cross);
    const double f1 = d1 + log2p1(t2);
    const double f2 = d2 + log2p1(t1);
    const double f12 = d1 + d2;
    return std::min(std::min(f0, f1), std::min(f2, f12));
}

inline void collect_active(double t1, double t2, double cross, double d1, double d2, double beta,
                           std::vector<int>& out) {
    const double f[4] = {log2p1(t1 + t2 + cross), d1 + log2p1(t2), d2 + log2p1(t1), d1 + d2};
    out.clear();
    for (int mask = 0; mask < 4; ++mask)
        if (f[mask] <= beta + kSolverTol) out.push_back(mask);
}

// Shared 2-relay solve over (r1, r2) given the per-relay gains a_k (so that
// t_k = a_k x_k) and the determinant cross coefficient q (t1 t2 scaled).
inline FixedStateSolution solve_two_var(double a1, double a2, double q, double c1, double c2) {
    const double cap = log2p1(a1 + a2 + q);
    const double r1max = c1 + cap;
    const double r2max = c2 + cap;
    auto obj = [&](double r1, double r2) {
        const double x1 = one_minus_exp2_neg(r1);
        const double x2 = one_minus_exp2_neg(r2);
        return subset_min(a1 * x1, a2 * x2, x1 * x2 * q, c1 - r1, c2 - r2);
    };

    FixedStateSolution sol;
    if (a1 <= 0.0 && a2 <= 0.0) {
        sol.r1 = sol.r2 = 0.0;
    } else if (a1 <= 0.0) {
        // Raising r_k for a dead branch only pays fronthaul cost.
        OptPoint p = golden_max([&](double r2) { return obj(0.0, r2); }, 0.0, r2max, 1e-7);
        sol.r1 = 0.0;
        sol.r2 = p.x;
    } else if (a2 <= 0.0) {
        OptPoint p = golden_max([&](double r1) { return obj(r1, 0.0); }, 0.0, r1max, 1e-7);
        sol.r1 = p.x;
        sol.r2 = 0.0;
    } else {
        OptPoint2 p = golden_max2(obj, 0.0, r1max, 0.0, r2max, 1e-7);
        sol.r1 = p.x1;
        sol.r2 = p.x2;
    }
    sol.beta = obj(sol.r1, sol.r2);
    // The origin attains exactly 0 (the empty subset gives log2(1) = 0), so
    // degenerate instances report beta = 0 with no roundoff residue.
    if (obj(0.0, 0.0) >= sol.beta) {
        sol.r1 = sol.r2 = 0.0;
        sol.beta = obj(0.0, 0.0);
    }
    const double x1 = one_minus_exp2_neg(sol.r1);
    const double x2 = one_minus_exp2_neg(sol.r2);
    collect_active(a1 * x1, a2 * x2, x1 * x2 * q, c1 - sol.r1, c2 - sol.r2, sol.beta,
                   sol.active_subsets);
    return sol;
}

}  // namespace detail

inline FixedStateSolution rate_single_fixed(double rho1, double rho2, double c1, double c2) {
    require_domain(rho1 >= 0.0 && rho2 >= 0.0, "rate_single_fixed: SNRs must be >= 0");
    require_domain(c1 >= 0.0 && c2 >= 0.0, "rate_single_fixed: capacities must be >= 0");
    return detail::solve_two_var(rho1, rho2, 0.0, c1, c2);
}

inline FixedStateSolution rate_two_fixed(const std::array<std::complex<double>, 2>& h1,
                                         const std::array<std::complex<double>, 2>& h2,
                                         double sigma2, double c1, double c2) {
    require_domain(sigma2 > 0.0, "rate_two_fixed: sigma2 must be > 0");
    require_domain(c1 >= 0.0 && c2 >= 0.0, "rate_two_fixed: capacities must be >= 0");
    const double n1 = norm_sq(h1);
    const double n2 = norm_sq(h2);
    const double a1 = n1 / sigma2;
    const double a2 = n2 / sigma2;
    // det[I + x1 M1 + x2 M2] = 1 + x1 a1 + x2 a2 + x1 x2 q for rank-one M_k;
    // q >= 0 by Cauchy-Schwarz, clamped against roundoff.
    const double q = std::max(0.0, (n1 * n2 - std::norm(inner(h1, h2))) / (sigma2 * sigma2));
    return detail::solve_two_var(a1, a2, q, c1, c2);
}

// Exhaustive grid maximization of an arbitrary two-variable objective over
// [0, r1_max] x [0, r2_max]; the validation oracle for the solvers above.
template <class F>
double brute_force_oracle(F&& objective, double r1_max, double r2_max, double step) {
    require_domain(step > 0.0, "brute_force_oracle: step must be > 0");
    require_domain(r1_max >= 0.0 && r2_max >= 0.0, "brute_force_oracle: empty box");
    const std::size_t n1 = static_cast<std::size_t>(std::floor(r1_max / step)) + 1;
    const std::size_t n2 = static_cast<std::size_t>(std::floor(r2_max / step)) + 1;
    double best = -kInf;
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            best = std::max(best, objective(static_cast<double>(i) * step, static_cast<double>(j) * step));
    return best;
}

namespace detail {

// Grid max of the subset-min objective with exact pruning: skips are based on
// upper bounds of the cell value against the running best, so the result
// equals the full scan. d-pieces fall as r2 grows (break), and the whole row
// is dominated once even the largest log term cannot beat the best.
inline double oracle_grid_min_subsets(double a1, double a2, double q, double c1, double c2,
                                      double step) {
    require_domain(step > 0.0, "oracle: step must be > 0");
    const double cap = log2p1(a1 + a2 + q);
    const double r1max = c1 + cap;
    const double r2max = c2 + cap;
    const std::size_t n1 = static_cast<std::size_t>(std::floor(r1max / step)) + 1;
    const std::size_t n2 = static_cast<std::size_t>(std::floor(r2max / step)) + 1;
    std::vector<double> x1(n1), t1(n1), l1(n1), g1(n1), x2(n2), t2(n2), l2(n2), g2(n2);
    for (std::size_t i = 0; i < n1; ++i) {
        const double r = static_cast<double>(i) * step;
        x1[i] = one_minus_exp2_neg(r);
        t1[i] = a1 * x1[i];
        l1[i] = log2p1(t1[i]);
        g1[i] = c1 - r;
    }
    for (std::size_t j = 0; j < n2; ++j) {
        const double r = static_cast<double>(j) * step;
        x2[j] = one_minus_exp2_neg(r);
        t2[j] = a2 * x2[j];
        l2[j] = log2p1(t2[j]);
        g2[j] = c2 - r;
    }
    const double t2_hi = t2[n2 - 1];
    const double x2_hi = x2[n2 - 1];
    double best = -kInf;
    for (std::size_t i = 0; i < n1; ++i) {
        if (log2p1(t1[i] + t2_hi + x1[i] * x2_hi * q) <= best) continue;
        const double dcap = std::min(l1[i], g1[i]);
        for (std::size_t j = 0; j < n2; ++j) {
            if (g2[j] + dcap <= best) break;
            double m = std::min(std::min(g1[i] + g2[j], l1[i] + g2[j]), l2[j] + g1[i]);
            if (m <= best) continue;
            m = std::min(m, log2p1(t1[i] + t2[j] + x1[i] * x2[j] * q));
            if (m > best) best = m;
        }
    }
    return best;
}

}  // namespace detail

inline double oracle_grid_single(double rho1, double rho2, double c1, double c2, double step) {
    return detail::oracle_grid_min_subsets(rho1, rho2, 0.0, c1, c2, step);
}

inline double oracle_grid_two(const std::array<std::complex<double>, 2>& h1,
                              const std::array<std::complex<double>, 2>& h2, double sigma2,
                              double c1, double c2, double step) {
    const double n1 = norm_sq(h1);
    const double n2 = norm_sq(h2);
    const double q = std::max(0.0, (n1 * n2 - std::norm(inner(h1, h2))) / (sigma2 * sigma2));
    return detail::oracle_grid_min_subsets(n1 / sigma2, n2 / sigma2, q, c1, c2, step);
}

}  // namespace relaycap
