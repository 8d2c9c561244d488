#pragma once

// Repo-wide RNG policy: every stochastic routine takes a 64-bit seed and
// draws from a std::mt19937_64 engine whose raw output is transformed by the
// explicit functions below (never by std:: distributions, whose output is
// implementation-defined). Identical seeds therefore give identical streams
// across runs and standard libraries. Parallel or multi-stream use derives
// sub-seeds with split_seed(), never by reusing the same engine.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mfitt {

/// Derive an independent sub-seed from (seed, stream index); splitmix64 mix.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 significant bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe as a logarithm argument.
    double uniform01_open_low() { return 1.0 - uniform01(); }

    /// Standard normal via Box-Muller (pairs cached).
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform01_open_low();
        double v = uniform01();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 2.0 * std::numbers::pi * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Unbiased integer in [0, bound) by rejection on the top bits.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace mfitt
