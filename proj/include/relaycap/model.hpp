#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "relaycap/common.hpp"
#include "relaycap/rng.hpp"

namespace relaycap {

// One realization of the relay-side channel state for the single-user network:
// instantaneous SNRs rho_k = |S_k|^2 / sigma^2, with |S_k|^2 ~ Exponential(1)
// under Rayleigh fading with unit-variance coefficients.
struct SingleUserSample {
    double rho1 = 0.0;
    double rho2 = 0.0;
};

inline SingleUserSample single_user_sample_from(double e1, double e2, double sigma2) {
    require_domain(sigma2 > 0.0, "single_user_sample_from: sigma2 must be > 0");
    require_domain(e1 >= 0.0 && e2 >= 0.0, "single_user_sample_from: gains must be >= 0");
    return {e1 / sigma2, e2 / sigma2};
}

inline SingleUserSample sample_single_user(Rng& rng, const NetworkParams& params) {
    return single_user_sample_from(rng.exponential(), rng.exponential(), params.sigma2);
}

// Channel vectors of the two-user network: h_k holds the states of both users
// at relay k, components i.i.d. CN(0, 1).
struct TwoUserSample {
    std::array<std::complex<double>, 2> h1{};
    std::array<std::complex<double>, 2> h2{};
};

inline TwoUserSample sample_two_user(Rng& rng) {
    TwoUserSample s;
    s.h1 = {rng.cnormal(1.0), rng.cnormal(1.0)};
    s.h2 = {rng.cnormal(1.0), rng.cnormal(1.0)};
    return s;
}

inline double norm_sq(const std::array<std::complex<double>, 2>& v) {
    return std::norm(v[0]) + std::norm(v[1]);
}

inline std::complex<double> inner(const std::array<std::complex<double>, 2>& a,
                                  const std::array<std::complex<double>, 2>& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

// Density of the single positive eigenvalue of S S^H for the rank-one
// two-relay state vector: lambda * exp(-lambda).
inline double eigen_pdf_single(double lambda) {
    require_domain(lambda >= 0.0, "eigen_pdf_single: lambda must be >= 0");
    return lambda * std::exp(-lambda);
}

// Unordered-eigenvalue density of the 2x2 unit-variance Wishart matrix H H^H.
// Laguerre expansion with L0(x) = 1 and L1(x) = 1 - x gives
// (1/2) [1 + (1 - lambda)^2] exp(-lambda).
inline double eigen_pdf_two(double lambda) {
    require_domain(lambda >= 0.0, "eigen_pdf_two: lambda must be >= 0");
    const double l1 = 1.0 - lambda;
    return 0.5 * (1.0 + l1 * l1) * std::exp(-lambda);
}

}  // namespace relaycap
