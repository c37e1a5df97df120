#pragma once

#include <complex>
#include <cstdint>
#include <cmath>

namespace relaycap {

// Splittable 64-bit generator (splitmix64 core). Per-trial streams are derived
// from (master seed, stream index) so Monte Carlo results do not depend on
// execution order or thread count.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Deterministic stream derivation; two mixing rounds decorrelate
    // (master, index) pairs that differ in a single bit.
    static Rng for_stream(std::uint64_t master, std::uint64_t stream) {
        return Rng(mix(mix(master) ^ mix(stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Exponential(1) via inverse CDF; -log1p(-u) is finite for u in [0,1).
    double exponential() { return -std::log1p(-uniform01()); }

    // Standard normal pair (Box-Muller, rejection-free so draw count is fixed).
    void normal_pair(double& z1, double& z2) {
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        double th = 6.283185307179586476925286766559 * u2;
        z1 = r * std::cos(th);
        z2 = r * std::sin(th);
    }

    // Circularly-symmetric complex Gaussian CN(0, var).
    std::complex<double> cnormal(double var) {
        double a, b;
        normal_pair(a, b);
        double s = std::sqrt(0.5 * var);
        return {s * a, s * b};
    }

  private:
    std::uint64_t state_;
};

}  // namespace relaycap
