#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "relaycap/common.hpp"
#include "relaycap/rng.hpp"

namespace relaycap {

struct MCEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
};

namespace detail {
inline std::atomic<int>& mc_thread_override() {
    static std::atomic<int> v{0};
    return v;
}
}  // namespace detail

// 0 restores the default (hardware concurrency).
inline void set_mc_threads(int n) { detail::mc_thread_override().store(n); }

inline int mc_threads() {
    int n = detail::mc_thread_override().load();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Sample mean and standard error of fn over `trials` independent draws.
// Trial i always uses the stream derived from (seed, i) and the reduction runs
// in index order, so the estimate is bit-identical for any thread count.
template <class Fn>
MCEstimate mc_estimate(Fn&& fn, std::int64_t trials, std::uint64_t seed, int threads = 0) {
    require_config(trials >= 2, "mc_estimate: trials must be >= 2");
    if (threads <= 0) threads = mc_threads();
    if (threads > trials) threads = static_cast<int>(trials);

    std::vector<double> values(static_cast<std::size_t>(trials));
    auto worker = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(i));
            values[static_cast<std::size_t>(i)] = fn(rng);
        }
    };
    if (threads <= 1) {
        worker(0, trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        const std::int64_t step = (trials + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::int64_t lo = t * step;
            const std::int64_t hi = std::min<std::int64_t>(trials, lo + step);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    // Welford in fixed order.
    double mean = 0.0, m2 = 0.0;
    std::int64_t n = 0;
    for (double v : values) {
        ++n;
        const double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }
    const double var = m2 / static_cast<double>(trials - 1);
    MCEstimate est;
    est.mean = mean;
    est.std_err = std::sqrt(std::max(0.0, var) / static_cast<double>(trials));
    est.trials = trials;
    est.seed = seed;
    return est;
}

}  // namespace relaycap
