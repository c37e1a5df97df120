#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace relaycap {

inline constexpr double kLn2 = 0.6931471805599453;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// log2(1 + x), accurate for small x.
inline double log2p1(double x) { return std::log1p(x) / kLn2; }

// 1 - 2^(-r), accurate for small r. Monotone increasing, in [0, 1) for r >= 0.
inline double one_minus_exp2_neg(double r) { return -std::expm1(-r * kLn2); }

inline void require_domain(bool cond, const char* msg) {
    if (!cond) throw std::domain_error(msg);
}

inline void require_config(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Noise power and per-relay fronthaul capacities. All rates in bits per
// complex dimension, SNR = 1/sigma2 (linear).
struct NetworkParams {
    double sigma2 = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;

    void validate() const {
        require_domain(sigma2 > 0.0, "NetworkParams: sigma2 must be > 0");
        require_domain(c1 >= 0.0 && c2 >= 0.0, "NetworkParams: capacities must be >= 0");
    }

    double snr() const { return 1.0 / sigma2; }
    double csum() const { return c1 + c2; }

    static NetworkParams from_snr_db(double snr_db, double c1, double c2) {
        NetworkParams p;
        p.sigma2 = std::pow(10.0, -snr_db / 10.0);
        p.c1 = c1;
        p.c2 = c2;
        p.validate();
        return p;
    }
};

inline double snr_db_to_sigma2(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

}  // namespace relaycap
