#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "relaycap/common.hpp"
#include "relaycap/fixed_state.hpp"
#include "relaycap/model.hpp"
#include "relaycap/montecarlo.hpp"

// Two-user fronthaul-compression scheme: each relay rate-distortion encodes
// its channel vector at per-component distortion D (costing 2 log2(1/D) bits),
// then compresses the received signal against the quantized state Z^(1) with
// effective noise 2D + sigma^2. Each relay picks its compression rate under
// the single-relay assumption; relays whose fronthaul cannot even carry the
// state description fall silent.

namespace relaycap {

// Bits per 2-vector symbol to describe the state at per-component distortion d.
inline double rd_bits(double d) {
    require_domain(d > 0.0 && d <= 1.0, "rd_bits: distortion must lie in (0, 1]");
    return 2.0 * std::log2(1.0 / d);
}

struct FcConfig {
    double d = 1.0;
    double c_eff1 = 0.0;  // C_k - R_k(D); negative marks a silent relay
    double c_eff2 = 0.0;
    double sigma2_eff = 0.0;  // 2D + sigma^2
};

inline FcConfig fc_config(const NetworkParams& params, double d) {
    params.validate();
    const double bits = rd_bits(d);
    return {d, params.c1 - bits, params.c2 - bits, 2.0 * d + params.sigma2};
}

// Quantized channel representations: components i.i.d. CN(0, 1 - D).
struct FcStateSample {
    std::array<std::complex<double>, 2> z1{};
    std::array<std::complex<double>, 2> z2{};
};

inline FcStateSample sample_fc_state(Rng& rng, double d) {
    const double var = 1.0 - d;
    FcStateSample s;
    s.z1 = {rng.cnormal(var), rng.cnormal(var)};
    s.z2 = {rng.cnormal(var), rng.cnormal(var)};
    return s;
}

// Local compression rate under the single-relay assumption: the crossing of
// the decreasing fronthaul branch c_eff - r and the increasing signal branch
// log2[1 + (1 - 2^{-r}) z_norm_sq / (2d + sigma^2)], bisected to 1e-8.
inline double fc_single_relay_r(double z_norm_sq, double c_eff, double d, double sigma2) {
    require_domain(z_norm_sq >= 0.0, "fc_single_relay_r: norm must be >= 0");
    if (c_eff <= 0.0 || z_norm_sq <= 0.0) return 0.0;
    const double gain = z_norm_sq / (2.0 * d + sigma2);
    auto gap = [&](double r) { return (c_eff - r) - log2p1(one_minus_exp2_neg(r) * gain); };
    return bisect_decreasing(gap, 0.0, c_eff, 1e-8);
}

// Per-state value of the scheme: min over relay subsets with a silent relay
// contributing neither fronthaul nor signal, clamped at the always-achievable 0.
inline double fc_sample_value(const NetworkParams& params, const FcConfig& cfg,
                              const FcStateSample& s) {
    const double sq1 = norm_sq(s.z1);
    const double sq2 = norm_sq(s.z2);
    const bool active1 = cfg.c_eff1 > 0.0;
    const bool active2 = cfg.c_eff2 > 0.0;
    const double r1 = active1 ? fc_single_relay_r(sq1, cfg.c_eff1, cfg.d, params.sigma2) : 0.0;
    const double r2 = active2 ? fc_single_relay_r(sq2, cfg.c_eff2, cfg.d, params.sigma2) : 0.0;
    const double x1 = active1 ? one_minus_exp2_neg(r1) : 0.0;
    const double x2 = active2 ? one_minus_exp2_neg(r2) : 0.0;
    const double se = cfg.sigma2_eff;
    const double t1 = x1 * sq1 / se;
    const double t2 = x2 * sq2 / se;
    const double q = std::max(0.0, (sq1 * sq2 - std::norm(inner(s.z1, s.z2))) / (se * se));
    const double d1 = active1 ? cfg.c_eff1 - r1 : 0.0;
    const double d2 = active2 ? cfg.c_eff2 - r2 : 0.0;
    return std::max(0.0, detail::subset_min(t1, t2, x1 * x2 * q, d1, d2));
}

inline MCEstimate fc_rate(const NetworkParams& params, double d, std::int64_t trials,
                          std::uint64_t seed) {
    const FcConfig cfg = fc_config(params, d);
    return mc_estimate(
        [&](Rng& rng) { return fc_sample_value(params, cfg, sample_fc_state(rng, d)); }, trials,
        seed);
}

struct FcBest {
    double d = 1.0;
    double rate = 0.0;
    double std_err = 0.0;
};

// Argmax over the distortion grid with common random numbers (same seed for
// every d); ties resolve to the larger distortion.
inline FcBest fc_best_d(const NetworkParams& params, const std::vector<double>& d_grid,
                        std::int64_t trials, std::uint64_t seed) {
    require_config(!d_grid.empty(), "fc_best_d: grid must be nonempty");
    FcBest best;
    bool first = true;
    for (double d : d_grid) {
        const MCEstimate est = fc_rate(params, d, trials, seed);
        if (first || est.mean >= best.rate) {
            best = {d, est.mean, est.std_err};
            first = false;
        }
    }
    return best;
}

inline std::vector<double> fc_default_d_grid(int points = 12, double d_min = 1e-3,
                                             double d_max = 1.0) {
    std::vector<double> g;
    for (int i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        g.push_back(d_min * std::pow(d_max / d_min, f));
    }
    return g;
}

}  // namespace relaycap
