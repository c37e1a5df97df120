#pragma once

#include <cmath>

#include "relaycap/common.hpp"
#include "relaycap/fixed_state.hpp"
#include "relaycap/model.hpp"
#include "relaycap/montecarlo.hpp"
#include "relaycap/quadrature.hpp"

// Cooperative informed-receiver upper bounds in closed form (water-level
// bisection against an eigenvalue density) and Monte Carlo lower bounds to the
// informed-receiver upper bound (constant capacity allocation).

namespace relaycap {

enum class Network { kSingleUser, kTwoUser };

inline double eigen_pdf(Network net, double lambda) {
    return net == Network::kSingleUser ? eigen_pdf_single(lambda) : eigen_pdf_two(lambda);
}

// Number of parallel streams: the rank-one single-user state carries one, the
// 2x2 two-user state two. Scales the rate and divides the fronthaul budget.
inline int stream_count(Network net) { return net == Network::kSingleUser ? 1 : 2; }

// integral_t^inf log2(lambda / t) f(lambda) dlambda, strictly decreasing in t.
inline double bottleneck_integral(double t, Network net) {
    require_domain(t > 0.0, "bottleneck_integral: threshold must be > 0");
    return integrate_to_inf([&](double lam) { return std::log2(lam / t) * eigen_pdf(net, lam); }, t);
}

struct CoopUbResult {
    double rate = 0.0;
    double nu = kInf;  // water-level threshold; +inf sentinel marks the zero-rate case
    double csum = 0.0;
};

// Water level nu >= 0 such that the bottleneck integral over [nu sigma2, inf)
// equals csum divided by the stream count. Bisection runs on log(nu sigma2)
// because the threshold shrinks exponentially with csum.
inline double solve_nu(double sigma2, double csum, Network net) {
    require_domain(sigma2 > 0.0, "solve_nu: sigma2 must be > 0");
    require_domain(csum >= 0.0, "solve_nu: csum must be >= 0");
    if (csum == 0.0) return kInf;
    const double target = csum / stream_count(net);

    double t_hi = 1.0;
    for (int i = 0; i < 200 && bottleneck_integral(t_hi, net) > target; ++i) t_hi *= 2.0;
    double t_lo = std::min(1.0, t_hi);
    for (int i = 0; i < 1000 && t_lo > 1e-290 && bottleneck_integral(t_lo, net) < target; ++i)
        t_lo *= 0.5;
    for (int i = 0; i < 200 && t_hi > t_lo * (1.0 + 1e-12); ++i) {
        const double t_mid = std::sqrt(t_lo * t_hi);
        if (bottleneck_integral(t_mid, net) >= target)
            t_lo = t_mid;
        else
            t_hi = t_mid;
    }
    return std::sqrt(t_lo * t_hi) / sigma2;
}

inline CoopUbResult coop_ub(double sigma2, double csum, Network net) {
    require_domain(sigma2 > 0.0, "coop_ub: sigma2 must be > 0");
    require_domain(csum >= 0.0, "coop_ub: csum must be >= 0");
    CoopUbResult res;
    res.csum = csum;
    if (csum == 0.0) return res;  // rate 0, nu sentinel stays +inf
    res.nu = solve_nu(sigma2, csum, net);
    const double t = res.nu * sigma2;
    const double log_level = log2p1(res.nu);
    res.rate = stream_count(net) *
               integrate_to_inf(
                   [&](double lam) { return (log2p1(lam / sigma2) - log_level) * eigen_pdf(net, lam); },
                   t);
    return res;
}

// E[ R(rho, C) ] with the fronthaul fixed at its nominal capacities: a lower
// bound to the informed-receiver upper bound, estimated by Monte Carlo.
inline MCEstimate check_ub_single(const NetworkParams& params, std::int64_t trials,
                                  std::uint64_t seed) {
    params.validate();
    return mc_estimate(
        [&](Rng& rng) {
            const SingleUserSample s = sample_single_user(rng, params);
            return rate_single_fixed(s.rho1, s.rho2, params.c1, params.c2).beta;
        },
        trials, seed);
}

inline MCEstimate check_ub_two(const NetworkParams& params, std::int64_t trials,
                               std::uint64_t seed) {
    params.validate();
    return mc_estimate(
        [&](Rng& rng) {
            const TwoUserSample s = sample_two_user(rng);
            return rate_two_fixed(s.h1, s.h2, params.sigma2, params.c1, params.c2).beta;
        },
        trials, seed);
}

}  // namespace relaycap
