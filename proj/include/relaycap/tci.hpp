#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "relaycap/common.hpp"
#include "relaycap/fixed_state.hpp"
#include "relaycap/opt.hpp"
#include "relaycap/quadrature.hpp"

// Truncated channel inversion: each relay forwards only the symbols whose
// fading magnitude clears a threshold, spending the binary entropy of the
// selection sequence on fronthaul and concentrating the rest on the selected
// samples. The central processor sorts the outputs into the four selection
// states; state (0,0) contributes nothing.

namespace relaycap {

// exp(a) E1(a) = integral_0^inf exp(-u)/(u + a) du; divergent at the origin.
// The shifted form stays finite for any a where exp(a) alone would overflow.
inline double scaled_exponential_integral_e1(double a) {
    require_domain(a >= 0.0, "scaled_exponential_integral_e1: argument must be >= 0");
    if (a <= 0.0) return kInf;
    return integrate_to_inf([a](double u) { return std::exp(-u) / (u + a); }, 0.0);
}

// E1(a) = integral_a^inf exp(-x)/x dx; divergent at the origin.
inline double exponential_integral_e1(double a) {
    require_domain(a >= 0.0, "exponential_integral_e1: argument must be >= 0");
    if (a <= 0.0) return kInf;
    return std::exp(-a) * scaled_exponential_integral_e1(a);
}

inline double binary_entropy_bits(double p) {
    require_domain(p >= 0.0 && p <= 1.0, "binary_entropy_bits: p must lie in [0, 1]");
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

struct TciStats {
    double p_sel = 0.0;       // P(|S| >= s_th) = exp(-s_th^2)
    double h_sel = 0.0;       // binary entropy of the selection sequence, bits
    double sigma2_eff = 0.0;  // sigma^2 E[1/|S|^2 | selected] = sigma^2 e^a E1(a)
    double rho_eff = 0.0;
    double c_eff = 0.0;       // (C - H) / P when C >= H
    bool feasible = false;
};

inline TciStats tci_stats(double sigma2, double relay_capacity, double s_th) {
    require_domain(sigma2 > 0.0, "tci_stats: sigma2 must be > 0");
    require_domain(relay_capacity >= 0.0, "tci_stats: capacity must be >= 0");
    require_domain(s_th >= 0.0, "tci_stats: threshold must be >= 0");
    TciStats st;
    const double a = s_th * s_th;
    st.p_sel = std::exp(-a);
    st.h_sel = binary_entropy_bits(st.p_sel);
    if (a <= 0.0) {
        st.sigma2_eff = kInf;  // E[1/e] diverges without truncation
        st.rho_eff = 0.0;
    } else {
        st.sigma2_eff = sigma2 * scaled_exponential_integral_e1(a);
        st.rho_eff = 1.0 / st.sigma2_eff;
    }
    st.feasible = relay_capacity >= st.h_sel;
    st.c_eff = st.feasible ? (relay_capacity - st.h_sel) / st.p_sel : 0.0;
    return st;
}

inline double tci_rate(const NetworkParams& params, double s_th) {
    params.validate();
    const TciStats s1 = tci_stats(params.sigma2, params.c1, s_th);
    const TciStats s2 = tci_stats(params.sigma2, params.c2, s_th);
    if (!s1.feasible || !s2.feasible) return 0.0;
    const double w11 = s1.p_sel * s2.p_sel;
    const double w10 = s1.p_sel * (1.0 - s2.p_sel);
    const double w01 = (1.0 - s1.p_sel) * s2.p_sel;

    auto objective = [&](double r1, double r2) {
        const double t1 = s1.rho_eff * one_minus_exp2_neg(r1);
        const double t2 = s2.rho_eff * one_minus_exp2_neg(r2);
        const double d1 = s1.c_eff - r1;
        const double d2 = s2.c_eff - r2;
        const double b11 = detail::subset_min(t1, t2, 0.0, d1, d2);
        const double b10 = std::min(log2p1(t1), d1);
        const double b01 = std::min(log2p1(t2), d2);
        return w11 * b11 + w10 * b10 + w01 * b01;
    };
    const double cap = log2p1(s1.rho_eff + s2.rho_eff);
    const double r1max = std::min(s1.c_eff + cap, 80.0);
    const double r2max = std::min(s2.c_eff + cap, 80.0);
    OptPoint2 p = golden_max2(objective, 0.0, r1max, 0.0, r2max, 1e-7);
    // The origin is feasible with value exactly 0.
    return std::max(p.value, objective(0.0, 0.0));
}

struct TciBest {
    double s_th = 0.0;
    double rate = 0.0;
};

// Grid argmax; ties resolve to the smallest threshold.
inline TciBest tci_best(const NetworkParams& params, const std::vector<double>& grid) {
    require_config(!grid.empty(), "tci_best: grid must be nonempty");
    TciBest best{grid.front(), tci_rate(params, grid.front())};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double rate = tci_rate(params, grid[i]);
        if (rate > best.rate) best = {grid[i], rate};
    }
    return best;
}

inline std::vector<double> tci_default_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 20; ++i) g.push_back(0.1 * i);
    return g;
}

}  // namespace relaycap
