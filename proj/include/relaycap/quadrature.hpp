#pragma once

#include <cmath>
#include <utility>

#include "relaycap/common.hpp"

namespace relaycap {
namespace detail {

// 15-point Kronrod extension of 7-point Gauss on [-1, 1].
// Nodes in descending order; odd indices are the embedded Gauss nodes.
inline constexpr double kGkNodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0,
};
inline constexpr double kGkWeights[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278,
};
inline constexpr double kGaussWeights[4] = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
};

// Returns {kronrod, gauss} estimates of the integral over [a, b].
template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kGkWeights[7];
    double resg = fc * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kGkNodes[i];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += kGkWeights[i] * (f1 + f2);
        if (i & 1) resg += kGaussWeights[(i - 1) / 2] * (f1 + f2);
    }
    return {resk * h, resg * h};
}

template <class F>
double integrate_rec(F&& f, double a, double b, double abs_tol, double rel_tol, int depth) {
    auto [k, g] = gk15(f, a, b);
    const double err = std::fabs(k - g);
    if (err <= abs_tol || err <= rel_tol * std::fabs(k) || depth >= 55) return k;
    const double m = 0.5 * (a + b);
    return integrate_rec(f, a, m, 0.5 * abs_tol, rel_tol, depth + 1) +
           integrate_rec(f, m, b, 0.5 * abs_tol, rel_tol, depth + 1);
}

}  // namespace detail

// Adaptive Gauss-Kronrod on a finite interval.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-11, double rel_tol = 1e-12) {
    if (!(b > a)) return 0.0;
    return detail::integrate_rec(f, a, b, abs_tol, rel_tol, 0);
}

// Semi-infinite integral of an exponentially decaying integrand: advances in
// fixed-width chunks until the tail contribution falls below 1e-12 of the
// running total.
template <class F>
double integrate_to_inf(F&& f, double a, double abs_tol = 1e-12, double rel_tol = 1e-12) {
    const double chunk = 32.0;
    double total = 0.0;
    double x = a;
    for (int i = 0; i < 300; ++i) {
        const double v = integrate(f, x, x + chunk, abs_tol, rel_tol);
        total += v;
        x += chunk;
        if (std::fabs(v) <= 1e-12 * std::fabs(total) + 1e-300) break;
    }
    return total;
}

}  // namespace relaycap
