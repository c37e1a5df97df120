#pragma once

#include <cmath>
#include <utility>

#include "relaycap/common.hpp"

namespace relaycap {

struct OptPoint {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section maximizer for a concave (hence unimodal) function on
// [lo, hi]. Endpoints are probed explicitly so boundary optima are exact.
template <class F>
OptPoint golden_max(F&& f, double lo, double hi, double xtol = 1e-8) {
    if (!(hi > lo)) return {lo, f(lo)};
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    OptPoint best = (f1 >= f2) ? OptPoint{x1, f1} : OptPoint{x2, f2};
    const double fl = f(lo);
    if (fl >= best.value) best = {lo, fl};
    const double fh = f(hi);
    if (fh > best.value) best = {hi, fh};
    return best;
}

struct OptPoint2 {
    double x1 = 0.0;
    double x2 = 0.0;
    double value = 0.0;
};

// Maximizer for a jointly concave function on a box: golden section over x1
// of the partial maximum over x2 (partial maximization preserves concavity).
template <class F>
OptPoint2 golden_max2(F&& f, double lo1, double hi1, double lo2, double hi2, double xtol = 1e-8) {
    auto inner = [&](double x1) {
        return golden_max([&](double x2) { return f(x1, x2); }, lo2, hi2, xtol);
    };
    OptPoint outer = golden_max([&](double x1) { return inner(x1).value; }, lo1, hi1, xtol);
    OptPoint in = inner(outer.x);
    return {outer.x, in.x, in.value};
}

// Root of a strictly decreasing function on [lo, hi] with g(lo) >= 0 >= g(hi).
template <class G>
double bisect_decreasing(G&& g, double lo, double hi, double xtol = 1e-10, int max_iter = 200) {
    double a = lo, b = hi;
    for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
        const double m = 0.5 * (a + b);
        if (g(m) >= 0.0)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

}  // namespace relaycap
