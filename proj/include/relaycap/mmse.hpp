#pragma once

#include <algorithm>
#include <cmath>

#include "relaycap/common.hpp"
#include "relaycap/montecarlo.hpp"
#include "relaycap/quadrature.hpp"

// MMSE-and-forward: each relay forms the MMSE estimate of the input,
// X_bar = U X + W0 with U = e/(e + sigma^2) for e = |S|^2, quantizes it as
// Z = X_bar + Q with quantization power D = E|X_bar|^2 / (2^C - 1), and the
// rate lower bound is
//   E log2 det([U1^2, U1 U2; U1 U2, U2^2] + diag(V1, V2))
//   - sum_k E log2( Var(U_k) |X|^2 + E[V_k] ),
// with V_k = U_k sigma^2/(e_k + sigma^2) + D_k.

namespace relaycap {

struct MmseTerms {
    double e_u = 0.0;
    double e_u2 = 0.0;
    double var_u = 0.0;
    double e_xbar2 = 0.0;  // equals e_u by MMSE orthogonality
    double d_k = 0.0;
    double e_v = 0.0;
};

inline MmseTerms mmse_terms(double sigma2, double relay_capacity) {
    require_domain(sigma2 > 0.0, "mmse_terms: sigma2 must be > 0");
    require_domain(relay_capacity > 0.0, "mmse_terms: capacity must be > 0");
    MmseTerms t;
    t.e_u = integrate_to_inf([&](double e) { return e / (e + sigma2) * std::exp(-e); }, 0.0);
    t.e_u2 = integrate_to_inf(
        [&](double e) {
            const double u = e / (e + sigma2);
            return u * u * std::exp(-e);
        },
        0.0);
    const double e_v0 = integrate_to_inf(
        [&](double e) {
            const double den = e + sigma2;
            return e * sigma2 / (den * den) * std::exp(-e);
        },
        0.0);
    t.var_u = std::max(0.0, t.e_u2 - t.e_u * t.e_u);
    t.e_xbar2 = t.e_u2 + e_v0;
    t.d_k = t.e_xbar2 / (std::exp2(relay_capacity) - 1.0);
    t.e_v = e_v0 + t.d_k;
    return t;
}

inline MCEstimate mmse_rate(const NetworkParams& params, std::int64_t trials, std::uint64_t seed) {
    params.validate();
    require_domain(params.c1 > 0.0 && params.c2 > 0.0, "mmse_rate: capacities must be > 0");
    const double sigma2 = params.sigma2;
    const MmseTerms t1 = mmse_terms(sigma2, params.c1);
    const MmseTerms t2 = mmse_terms(sigma2, params.c2);

    // |X|^2 ~ Exponential(1), so the per-relay entropy terms are 1-D integrals.
    auto entropy_term = [&](const MmseTerms& t) {
        return integrate_to_inf(
            [&](double x) { return std::log2(t.var_u * x + t.e_v) * std::exp(-x); }, 0.0);
    };
    const double penalty = entropy_term(t1) + entropy_term(t2);

    MCEstimate det_term = mc_estimate(
        [&](Rng& rng) {
            const double e1 = rng.exponential();
            const double e2 = rng.exponential();
            const double u1 = e1 / (e1 + sigma2);
            const double u2 = e2 / (e2 + sigma2);
            const double v1 = e1 * sigma2 / ((e1 + sigma2) * (e1 + sigma2)) + t1.d_k;
            const double v2 = e2 * sigma2 / ((e2 + sigma2) * (e2 + sigma2)) + t2.d_k;
            return std::log2(u1 * u1 * v2 + u2 * u2 * v1 + v1 * v2);
        },
        trials, seed);

    MCEstimate est;
    // The bound can dip below zero at tiny capacities; zero is always achievable.
    est.mean = std::max(0.0, det_term.mean - penalty);
    est.std_err = det_term.std_err;
    est.trials = trials;
    est.seed = seed;
    return est;
}

}  // namespace relaycap
