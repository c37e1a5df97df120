#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "relaycap/common.hpp"
#include "relaycap/fixed_state.hpp"
#include "relaycap/opt.hpp"

// Quantized channel inversion: each relay inverts its channel, degrades the
// noise level up to the closest upper point of a fixed grid, spends
// H(level) = log2 J fronthaul bits on the level sequence, and splits the rest
// across levels. The achievable rate is the optimum of
//   maximize  sum_{j1,j2} P1_{j1} P2_{j2} min_T f_T(j1, j2)
//   s.t.      sum_j c_{k,j} P_{k,j} <= C_k - H_k,   r_{k,j}, c_{k,j} >= 0,
// where f_T uses the quantized SNRs rho_{k,j} = 1/(b_j sigma^2) and each
// relay's (r, c) pair is indexed by its own level only.
//
// The objective is jointly concave. Solved by exact block-coordinate ascent
// (one relay at a time: levels decouple given the other relay, leaving a
// separable concave allocation handled by waterfilling on the budget
// multiplier), followed by a projected-supergradient polish that guards
// against the rare kink alignments where alternating maximization can stall.

namespace relaycap {

struct QciGrid {
    std::vector<double> levels;  // noise quantization points, last = +inf
    std::vector<double> probs;   // equiprobable design: 1/J each
    double entropy_bits = 0.0;   // log2 J
};

// Equiprobable quantiles of xi = 1/|S|^2 with |S|^2 ~ Exponential(1):
// P(xi <= b) = exp(-1/b) = j/J  =>  b_j = 1/(ln J - ln j), b_J = +inf.
inline QciGrid qci_grid(int j_count) {
    require_config(j_count >= 2, "qci_grid: need at least 2 levels");
    QciGrid g;
    const double J = static_cast<double>(j_count);
    for (int j = 1; j < j_count; ++j) g.levels.push_back(1.0 / (std::log(J) - std::log(j)));
    g.levels.push_back(kInf);
    g.probs.assign(static_cast<std::size_t>(j_count), 1.0 / J);
    g.entropy_bits = std::log2(J);
    return g;
}

// Closest upper quantization level.
inline int qci_level_index(const QciGrid& grid, double xi) {
    for (std::size_t j = 0; j + 1 < grid.levels.size(); ++j)
        if (xi <= grid.levels[j]) return static_cast<int>(j);
    return static_cast<int>(grid.levels.size()) - 1;
}

struct QciSolution {
    double rate = 0.0;
    bool feasible = false;  // false when some C_k < log2 J
    std::array<std::vector<double>, 2> r;
    std::array<std::vector<double>, 2> c;
};

namespace detail {

class QciSolver {
  public:
    QciSolver(const NetworkParams& params, int j_count)
        : J_(j_count), budget_{params.c1, params.c2} {
        const QciGrid grid = qci_grid(j_count);
        entropy_ = grid.entropy_bits;
        budget_[0] -= entropy_;
        budget_[1] -= entropy_;
        rho_.assign(static_cast<std::size_t>(J_), 0.0);
        for (int j = 0; j < J_; ++j)
            rho_[static_cast<std::size_t>(j)] =
                std::isinf(grid.levels[static_cast<std::size_t>(j)])
                    ? 0.0
                    : 1.0 / (grid.levels[static_cast<std::size_t>(j)] * params.sigma2);
        rmax_ = 46.0;  // 2^-46 is below double noise; larger r only pays cost
    }

    QciSolution solve() {
        QciSolution sol;
        sol.feasible = budget_[0] >= 0.0 && budget_[1] >= 0.0;
        if (!sol.feasible) return sol;

        double best = init_uniform();
        best = alternate(best, 60);
        for (int round = 0; round < 3; ++round) {
            const double polished = polish(best, 4000);
            if (polished <= best + 1e-8) {
                best = std::max(best, polished);
                break;
            }
            best = alternate(polished, 40);
        }
        sol.rate = std::max(0.0, best);
        sol.r = r_;
        sol.c = c_;
        return sol;
    }

  private:
    using Vars = std::array<std::vector<double>, 2>;

    double init_uniform() {
        for (int k = 0; k < 2; ++k) {
            r_[k].assign(static_cast<std::size_t>(J_), 1.0);
            c_[k].assign(static_cast<std::size_t>(J_), std::max(0.0, budget_[k]));
            r_[k].back() = 0.0;  // the +inf level carries no signal
        }
        return eval();
    }

    // Expected rate over both level sequences.
    double eval() const {
        double total = 0.0;
        for (int j1 = 0; j1 < J_; ++j1) {
            const std::size_t u1 = static_cast<std::size_t>(j1);
            const double t1 = rho_[u1] * one_minus_exp2_neg(r_[0][u1]);
            const double d1 = c_[0][u1] - r_[0][u1];
            for (int j2 = 0; j2 < J_; ++j2) {
                const std::size_t u2 = static_cast<std::size_t>(j2);
                const double t2 = rho_[u2] * one_minus_exp2_neg(r_[1][u2]);
                const double d2 = c_[1][u2] - r_[1][u2];
                total += subset_min(t1, t2, 0.0, d1, d2);
            }
        }
        return total / (static_cast<double>(J_) * static_cast<double>(J_));
    }

    // Expected cell value for relay `k` sitting at level with SNR `rho` and
    // variables (rv, cv), against the cached profile of the other relay.
    double phi(double rho, double rv, double cv) const {
        const double t = rho * one_minus_exp2_neg(rv);
        const double l = log2p1(t);
        const double d = cv - rv;
        double s = 0.0;
        for (int j = 0; j < J_; ++j) {
            const double f0 = log2p1(t + other_t_[static_cast<std::size_t>(j)]);
            const double f1 = d + other_l_[static_cast<std::size_t>(j)];
            const double f2 = other_d_[static_cast<std::size_t>(j)] + l;
            const double f12 = d + other_d_[static_cast<std::size_t>(j)];
            s += std::min(std::min(f0, f1), std::min(f2, f12));
        }
        return s / static_cast<double>(J_);
    }

    void cache_other(int k) {
        const int o = 1 - k;
        other_t_.resize(static_cast<std::size_t>(J_));
        other_l_.resize(static_cast<std::size_t>(J_));
        other_d_.resize(static_cast<std::size_t>(J_));
        for (int j = 0; j < J_; ++j) {
            const double x = one_minus_exp2_neg(r_[o][static_cast<std::size_t>(j)]);
            other_t_[static_cast<std::size_t>(j)] = rho_[static_cast<std::size_t>(j)] * x;
            other_l_[static_cast<std::size_t>(j)] = log2p1(other_t_[static_cast<std::size_t>(j)]);
            other_d_[static_cast<std::size_t>(j)] =
                c_[o][static_cast<std::size_t>(j)] - r_[o][static_cast<std::size_t>(j)];
        }
    }

    struct LevelChoice {
        double r = 0.0, c = 0.0, value = 0.0;
    };

    // Per-level maximizer of phi - mu * c over the box, with the capacity
    // shrunk to the left edge of its optimal plateau so that the allocation
    // responds monotonically to mu.
    LevelChoice level_max(double rho, double mu, double cbox) const {
        auto f = [&](double rv, double cv) { return phi(rho, rv, cv) - mu * cv; };
        OptPoint2 p = golden_max2(f, 0.0, rmax_, 0.0, cbox, 1e-7);
        double lo = 0.0, hi = p.x2;
        const double keep = p.value - 1e-11;
        for (int i = 0; i < 45 && hi - lo > 1e-9; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (f(p.x1, mid) >= keep)
                hi = mid;
            else
                lo = mid;
        }
        LevelChoice out;
        out.c = hi;
        const double refreshed = f(p.x1, hi);
        out.r = p.x1;
        out.value = refreshed;
        return out;
    }

    // Exact block update for relay k: waterfilling on the budget multiplier.
    void block_update(int k) {
        cache_other(k);
        const double total_cap = static_cast<double>(J_) * budget_[k];
        const double cbox = total_cap;
        std::vector<LevelChoice> choice(static_cast<std::size_t>(J_));
        auto solve_at = [&](double mu) {
            double sum_c = 0.0;
            for (int j = 0; j < J_; ++j) {
                choice[static_cast<std::size_t>(j)] = level_max(rho_[static_cast<std::size_t>(j)], mu, cbox);
                sum_c += choice[static_cast<std::size_t>(j)].c;
            }
            return sum_c;
        };
        double sum_c = solve_at(0.0);
        if (sum_c > total_cap + 1e-9) {
            // Marginal value of capacity never exceeds 1 bit per bit, so the
            // multiplier lives in [0, 1].
            double lo = 0.0, hi = 1.02;
            for (int it = 0; it < 40; ++it) {
                const double mu = 0.5 * (lo + hi);
                sum_c = solve_at(mu);
                if (sum_c > total_cap)
                    lo = mu;
                else
                    hi = mu;
            }
            sum_c = solve_at(hi);
            if (sum_c > total_cap && sum_c > 0.0) {
                const double scale = total_cap / sum_c;
                for (auto& ch : choice) ch.c *= scale;
            }
        }
        for (int j = 0; j < J_; ++j) {
            r_[k][static_cast<std::size_t>(j)] = choice[static_cast<std::size_t>(j)].r;
            c_[k][static_cast<std::size_t>(j)] = choice[static_cast<std::size_t>(j)].c;
        }
    }

    double alternate(double current, int max_sweeps) {
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            block_update(0);
            block_update(1);
            const double next = eval();
            if (next <= current + 1e-10) return std::max(next, current);
            current = next;
        }
        return current;
    }

    // Projected supergradient over all 4J variables from the alternation fixed
    // point; returns the best feasible value found (>= `current`).
    double polish(double current, int iters) {
        Vars r = r_, c = c_;
        Vars best_r = r_, best_c = c_;
        double best = current;
        const double step0 = 0.5;
        for (int it = 0; it < iters; ++it) {
            Vars gr, gc;
            for (int k = 0; k < 2; ++k) {
                gr[k].assign(static_cast<std::size_t>(J_), 0.0);
                gc[k].assign(static_cast<std::size_t>(J_), 0.0);
            }
            const double w = 1.0 / (static_cast<double>(J_) * static_cast<double>(J_));
            for (int j1 = 0; j1 < J_; ++j1) {
                const std::size_t u1 = static_cast<std::size_t>(j1);
                const double x1 = one_minus_exp2_neg(r[0][u1]);
                const double t1 = rho_[u1] * x1;
                const double d1 = c[0][u1] - r[0][u1];
                for (int j2 = 0; j2 < J_; ++j2) {
                    const std::size_t u2 = static_cast<std::size_t>(j2);
                    const double x2 = one_minus_exp2_neg(r[1][u2]);
                    const double t2 = rho_[u2] * x2;
                    const double d2 = c[1][u2] - r[1][u2];
                    const double f[4] = {log2p1(t1 + t2), d1 + log2p1(t2), d2 + log2p1(t1), d1 + d2};
                    int arg = 0;
                    for (int m = 1; m < 4; ++m)
                        if (f[m] < f[arg]) arg = m;
                    // df/dr via dt/dr = rho (1 - x) ln 2 and d log2(1+t) = 1/((1+t) ln 2).
                    switch (arg) {
                        case 0:
                            gr[0][u1] += w * rho_[u1] * (1.0 - x1) / (1.0 + t1 + t2);
                            gr[1][u2] += w * rho_[u2] * (1.0 - x2) / (1.0 + t1 + t2);
                            break;
                        case 1:
                            gr[0][u1] -= w;
                            gc[0][u1] += w;
                            gr[1][u2] += w * rho_[u2] * (1.0 - x2) / (1.0 + t2);
                            break;
                        case 2:
                            gr[1][u2] -= w;
                            gc[1][u2] += w;
                            gr[0][u1] += w * rho_[u1] * (1.0 - x1) / (1.0 + t1);
                            break;
                        default:
                            gr[0][u1] -= w;
                            gc[0][u1] += w;
                            gr[1][u2] -= w;
                            gc[1][u2] += w;
                            break;
                    }
                }
            }
            const double step = step0 / std::sqrt(static_cast<double>(it + 1));
            for (int k = 0; k < 2; ++k) {
                for (int j = 0; j < J_; ++j) {
                    const std::size_t u = static_cast<std::size_t>(j);
                    r[k][u] = std::clamp(r[k][u] + step * gr[k][u], 0.0, rmax_);
                    c[k][u] = std::max(0.0, c[k][u] + step * gc[k][u]);
                }
                project_budget(c[k], static_cast<double>(J_) * budget_[k]);
            }
            std::swap(r_, r);
            std::swap(c_, c);
            const double val = eval();
            std::swap(r_, r);
            std::swap(c_, c);
            if (val > best) {
                best = val;
                best_r = r;
                best_c = c;
            }
        }
        r_ = best_r;
        c_ = best_c;
        return best;
    }

    // Euclidean projection onto {c >= 0, sum c <= cap}.
    static void project_budget(std::vector<double>& c, double cap) {
        double sum = 0.0;
        for (double v : c) sum += v;
        if (sum <= cap) return;
        double lo = 0.0, hi = 0.0;
        for (double v : c) hi = std::max(hi, v);
        for (int it = 0; it < 60; ++it) {
            const double theta = 0.5 * (lo + hi);
            double s = 0.0;
            for (double v : c) s += std::max(0.0, v - theta);
            if (s > cap)
                lo = theta;
            else
                hi = theta;
        }
        for (double& v : c) v = std::max(0.0, v - hi);
    }

    int J_;
    std::array<double, 2> budget_;
    double entropy_ = 0.0;
    double rmax_ = 46.0;
    std::vector<double> rho_;
    Vars r_, c_;
    std::vector<double> other_t_, other_l_, other_d_;
};

}  // namespace detail

inline QciSolution qci_solve(const NetworkParams& params, int j_count) {
    params.validate();
    require_config(j_count >= 2, "qci_solve: need at least 2 levels");
    detail::QciSolver solver(params, j_count);
    return solver.solve();
}

inline double qci_rate(const NetworkParams& params, int j_count) {
    return qci_solve(params, j_count).rate;
}

}  // namespace relaycap
