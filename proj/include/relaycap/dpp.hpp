#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "relaycap/common.hpp"
#include "relaycap/fixed_state.hpp"
#include "relaycap/model.hpp"
#include "relaycap/montecarlo.hpp"
#include "relaycap/opt.hpp"

// Drift-plus-penalty approximation of the informed-receiver upper bound.
// Each slot draws a fresh channel state, solves
//   minimize  sum_k c_k Q_k(t) - V beta
//   s.t.      beta <= subset objectives with per-slot capacities c_k,
//             0 <= c_k <= C_max,  r_k >= 0,
// then feeds the chosen c_k into virtual queues whose stability enforces the
// long-run average fronthaul constraints.

namespace relaycap {

struct DppConfig {
    double v = 100.0;      // penalty weight
    double c_max = 0.0;    // per-slot capacity cap, >= max(C_1, C_2)
    std::int64_t slots = 200000;

    void validate(const NetworkParams& p) const {
        require_config(v > 0.0, "DppConfig: v must be > 0");
        require_config(c_max >= std::max(p.c1, p.c2), "DppConfig: c_max must be >= max capacity");
        require_config(slots >= 1, "DppConfig: slots must be >= 1");
    }
};

struct DppState {
    double q1 = 0.0;
    double q2 = 0.0;
    std::int64_t t = 0;
    double rate_sum = 0.0;
    double cap_sum1 = 0.0;
    double cap_sum2 = 0.0;
};

struct DppDecision {
    double c1 = 0.0;
    double c2 = 0.0;
    double beta = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
};

namespace detail {

// For fixed (r1, r2) the slot problem reduces to a tiny LP in (beta, c1, c2):
//   maximize v beta - q1 c1 - q2 c2
//   s.t. beta <= a0, beta <= a1 + c1, beta <= a2 + c2, beta <= a12 + c1 + c2,
//        0 <= c_k <= cmax,
// with a0 = log2[1 + rho1 x1 + rho2 x2], a1 = log2(1 + rho2 x2) - r1,
// a2 = log2(1 + rho1 x1) - r2, a12 = -r1 - r2. The profit v beta - cost(beta)
// is piecewise-linear concave in beta and every slope change lies in
// {a1, a2, a12, a1 + a2 - a12, a12 + cmax, beta_hi}, so scanning those
// candidates solves the LP exactly.
struct SlotLp {
    double a0, a1, a2, a12;
    double q1, q2, v, cmax;

    double beta_hi() const {
        return std::min(std::min(a0, a12 + 2.0 * cmax), std::min(a1 + cmax, a2 + cmax));
    }

    // Cheapest (c1, c2) supporting beta <= beta_hi. The pair constraint gets
    // its residual from the cheaper queue first; ties go to relay 1.
    double cost(double beta, double* c1_out = nullptr, double* c2_out = nullptr) const {
        double c1 = std::max(0.0, beta - a1);
        double c2 = std::max(0.0, beta - a2);
        const double residual = (beta - a12) - c1 - c2;
        if (residual > 0.0) {
            if (q1 <= q2) {
                const double d = std::min(residual, cmax - c1);
                c1 += d;
                c2 += residual - d;
            } else {
                const double d = std::min(residual, cmax - c2);
                c2 += d;
                c1 += residual - d;
            }
        }
        if (c1_out) *c1_out = c1;
        if (c2_out) *c2_out = c2;
        return q1 * c1 + q2 * c2;
    }

    // Returns the optimal profit; fills beta and the supporting capacities.
    double solve(double* beta_out, double* c1_out, double* c2_out) const {
        const double bh = beta_hi();
        const double cands[6] = {bh, a1, a2, a12, a1 + a2 - a12, a12 + cmax};
        double best = -kInf, best_beta = bh, best_c1 = 0.0, best_c2 = 0.0;
        for (double cand : cands) {
            const double b = std::min(cand, bh);
            double c1, c2;
            const double profit = v * b - cost(b, &c1, &c2);
            if (profit > best) {
                best = profit;
                best_beta = b;
                best_c1 = c1;
                best_c2 = c2;
            }
        }
        *beta_out = best_beta;
        *c1_out = best_c1;
        *c2_out = best_c2;
        return best;
    }
};

}  // namespace detail

inline DppDecision dpp_step(const DppState& state, const SingleUserSample& sample,
                            const DppConfig& config, const NetworkParams& params) {
    config.validate(params);
    const double rho1 = sample.rho1;
    const double rho2 = sample.rho2;

    auto profit_at = [&](double r1, double r2, DppDecision* dec) {
        const double x1 = one_minus_exp2_neg(r1);
        const double x2 = one_minus_exp2_neg(r2);
        const double l1 = log2p1(rho1 * x1);
        const double l2 = log2p1(rho2 * x2);
        detail::SlotLp lp;
        lp.a0 = log2p1(rho1 * x1 + rho2 * x2);
        lp.a1 = l2 - r1;
        lp.a2 = l1 - r2;
        lp.a12 = -r1 - r2;
        lp.q1 = state.q1;
        lp.q2 = state.q2;
        lp.v = config.v;
        lp.cmax = config.c_max;
        double beta, c1, c2;
        const double profit = lp.solve(&beta, &c1, &c2);
        if (dec) *dec = {c1, c2, beta, r1, r2};
        return profit;
    };
    auto profit = [&](double r1, double r2) { return profit_at(r1, r2, nullptr); };

    const double cap = log2p1(rho1 + rho2);
    const double rmax = config.c_max + cap;
    double r1 = 0.0, r2 = 0.0;
    double val;
    if (rho1 <= 0.0 && rho2 <= 0.0) {
        val = profit(0.0, 0.0);
    } else if (rho1 <= 0.0) {
        OptPoint p = golden_max([&](double r) { return profit(0.0, r); }, 0.0, rmax, 2e-7);
        r2 = p.x;
        val = p.value;
    } else if (rho2 <= 0.0) {
        OptPoint p = golden_max([&](double r) { return profit(r, 0.0); }, 0.0, rmax, 2e-7);
        r1 = p.x;
        val = p.value;
    } else {
        OptPoint2 p = golden_max2(profit, 0.0, rmax, 0.0, rmax, 2e-7);
        r1 = p.x1;
        r2 = p.x2;
        val = p.value;
    }
    // The origin supports (beta, c) = 0 with zero profit; prefer it when the
    // search cannot do strictly better so degenerate slots are exact.
    if (profit(0.0, 0.0) >= val) {
        r1 = r2 = 0.0;
    }
    DppDecision dec;
    profit_at(r1, r2, &dec);
    return dec;
}

// Q_k <- max(Q_k + c_k - C_k, 0); also advances the slot index and the
// per-relay allocated-capacity accumulators.
inline DppState queue_update(const DppState& state, double c1_star, double c2_star,
                             const NetworkParams& params) {
    DppState next = state;
    next.q1 = std::max(state.q1 + c1_star - params.c1, 0.0);
    next.q2 = std::max(state.q2 + c2_star - params.c2, 0.0);
    next.cap_sum1 += c1_star;
    next.cap_sum2 += c2_star;
    next.t += 1;
    return next;
}

// Optimality-gap constant of the drift-plus-penalty approximation: the
// long-run average rate is within B/V of the informed-receiver optimum, with
// B = (1/2) sum_k max{C_k^2, (C_max - C_k)^2} for two relays.
inline double dpp_gap_constant(const NetworkParams& params, double c_max) {
    require_config(c_max >= std::max(params.c1, params.c2),
                   "dpp_gap_constant: c_max must be >= max capacity");
    const double b1 = std::max(params.c1 * params.c1, (c_max - params.c1) * (c_max - params.c1));
    const double b2 = std::max(params.c2 * params.c2, (c_max - params.c2) * (c_max - params.c2));
    return 0.5 * (b1 + b2);
}

struct DppRunResult {
    MCEstimate estimate;        // mean of beta*(t); std_err from 20 batch means
    double avg_c1 = 0.0;
    double avg_c2 = 0.0;
    double q1_final = 0.0;
    double q2_final = 0.0;
    double second_half_mean = 0.0;
};

inline DppRunResult dpp_run(const NetworkParams& params, const DppConfig& config,
                            std::uint64_t seed) {
    params.validate();
    config.validate(params);
    DppState state;
    std::vector<double> betas;
    betas.reserve(static_cast<std::size_t>(config.slots));
    for (std::int64_t t = 0; t < config.slots; ++t) {
        Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(t));
        const SingleUserSample s = sample_single_user(rng, params);
        const DppDecision dec = dpp_step(state, s, config, params);
        state.rate_sum += dec.beta;
        betas.push_back(dec.beta);
        state = queue_update(state, dec.c1, dec.c2, params);
    }
    DppRunResult res;
    const double n = static_cast<double>(config.slots);
    res.estimate.mean = state.rate_sum / n;
    res.estimate.trials = config.slots;
    res.estimate.seed = seed;
    res.avg_c1 = state.cap_sum1 / n;
    res.avg_c2 = state.cap_sum2 / n;
    res.q1_final = state.q1;
    res.q2_final = state.q2;

    double half_sum = 0.0;
    const std::size_t half = betas.size() / 2;
    for (std::size_t i = half; i < betas.size(); ++i) half_sum += betas[i];
    res.second_half_mean = betas.size() > half ? half_sum / static_cast<double>(betas.size() - half) : 0.0;

    // Batch means absorb the serial correlation introduced by the queues.
    const int nbatch = 20;
    if (config.slots >= 2 * nbatch) {
        const std::size_t len = betas.size() / nbatch;
        double bm[nbatch];
        for (int b = 0; b < nbatch; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < len; ++i) s += betas[static_cast<std::size_t>(b) * len + i];
            bm[b] = s / static_cast<double>(len);
        }
        double mean = 0.0;
        for (double v : bm) mean += v;
        mean /= nbatch;
        double var = 0.0;
        for (double v : bm) var += (v - mean) * (v - mean);
        var /= (nbatch - 1);
        res.estimate.std_err = std::sqrt(var / nbatch);
    }
    return res;
}

struct DppSweepEntry {
    double c_max = 0.0;
    DppRunResult result;
};

struct DppSweepResult {
    double best_c_max = 0.0;
    DppRunResult best;
    std::vector<DppSweepEntry> entries;
};

// Runs the cap sweep c_max = max(C_k) + offset for each offset and keeps the
// highest average rate (ties to the smaller cap). Entries run concurrently;
// each is seeded identically so the sweep shares channel realizations.
inline DppSweepResult dpp_sweep_cmax(const NetworkParams& params, double v,
                                     const std::vector<double>& offsets, std::int64_t slots,
                                     std::uint64_t seed) {
    require_config(!offsets.empty(), "dpp_sweep_cmax: offsets must be nonempty");
    const double base = std::max(params.c1, params.c2);
    DppSweepResult sweep;
    sweep.entries.resize(offsets.size());
    const int workers = std::min<int>(mc_threads(), static_cast<int>(offsets.size()));
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    auto run_one = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= offsets.size()) return;
            DppConfig cfg;
            cfg.v = v;
            cfg.c_max = base + offsets[i];
            cfg.slots = slots;
            sweep.entries[i] = {cfg.c_max, dpp_run(params, cfg, seed)};
        }
    };
    if (workers <= 1) {
        run_one();
    } else {
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_one);
        for (auto& th : pool) th.join();
    }
    std::size_t best_i = 0;
    for (std::size_t i = 1; i < sweep.entries.size(); ++i)
        if (sweep.entries[i].result.estimate.mean > sweep.entries[best_i].result.estimate.mean)
            best_i = i;
    sweep.best_c_max = sweep.entries[best_i].c_max;
    sweep.best = sweep.entries[best_i].result;
    return sweep;
}

}  // namespace relaycap
