#pragma once

// Seeded synthetic signals with analytically known properties; these are the
// ground truth against which every estimator in the library is tested.
// Determinism contract: a GeneratorSpec (including its seed) fully determines
// the output. Draws come from mfitt::Rng (mt19937_64 raw output, explicit
// transforms) in a fixed documented order; reductions are sequential, so a
// given libm produces bit-identical output on every run.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mfitt/common.hpp"
#include "mfitt/rng.hpp"

namespace mfitt {

enum class GeneratorKind { white, ar1, fgn, binomial_cascade, weibull_renewal, pareto };

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::white;
    std::size_t length = 0;
    std::uint64_t seed = 1;
    // per-kind parameters
    double hurst = 0.5;  // fgn: H in (0,1)
    double p = 0.5;      // cascade weight in (0,1)
    int levels = 0;      // cascade dyadic refinements; length = 2^levels
    double alpha = 1.0;  // weibull-renewal shape
    double x0 = 1.0;     // weibull-renewal scale
    double beta = 3.0;   // pareto survival exponent
    double x_min = 1.0;  // pareto threshold
    double phi = 0.0;    // ar1 coefficient in (-1,1)
};

namespace detail {

// In-place radix-2 complex FFT (size must be a power of two). Only used for
// the circulant embedding below, where sizes are powers of two by
// construction.
inline void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    require(n != 0 && (n & (n - 1)) == 0, "fft: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Unit-variance fractional Gaussian noise autocovariance.
inline double fgn_autocov(double hurst, std::int64_t k) {
    if (k == 0) return 1.0;
    const double ak = std::fabs(static_cast<double>(k));
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(ak + 1.0, h2) - 2.0 * std::pow(ak, h2) + std::pow(ak - 1.0, h2));
}

// Exact-covariance fGn by circulant embedding (Davies-Harte). The embedding
// eigenvalues are the DFT of the wrapped autocovariance; they are
// non-negative for fGn, so the synthesis is exact, not approximate.
inline std::vector<double> generate_fgn(std::size_t n, double hurst, std::uint64_t seed) {
    require(hurst > 0.0 && hurst < 1.0, "generate: fgn needs H in (0,1)");
    const std::size_t m = std::bit_ceil(2 * n);
    std::vector<std::complex<double>> grid(m);
    for (std::size_t k = 0; k <= m / 2; ++k) grid[k] = fgn_autocov(hurst, static_cast<std::int64_t>(k));
    for (std::size_t k = 1; k < m / 2; ++k) grid[m - k] = grid[k];
    fft_radix2(grid);

    std::vector<double> lambda(m);
    double max_l = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        lambda[k] = grid[k].real();
        max_l = std::max(max_l, lambda[k]);
    }
    for (double& l : lambda) {
        require(l > -1e-8 * max_l, "generate: circulant embedding not non-negative definite");
        if (l < 0.0) l = 0.0;
    }

    Rng rng(seed);
    const double inv_m = 1.0 / static_cast<double>(m);
    grid[0] = std::sqrt(lambda[0] * inv_m) * rng.gauss();
    grid[m / 2] = std::sqrt(lambda[m / 2] * inv_m) * rng.gauss();
    for (std::size_t k = 1; k < m / 2; ++k) {
        const double amp = std::sqrt(0.5 * lambda[k] * inv_m);
        const double re = rng.gauss();
        const double im = rng.gauss();
        grid[k] = std::complex<double>(amp * re, amp * im);
        grid[m - k] = std::conj(grid[k]);
    }
    fft_radix2(grid);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = grid[i].real();
    return out;
}

} // namespace detail

/// Deterministic binomial measure after `levels` dyadic refinements with
/// weights {p, 1-p}, rescaled to unit mean. Cell k of 2^levels receives
/// p^(levels - ones(k)) * (1-p)^ones(k) * 2^levels.
inline std::vector<double> generate_cascade(int levels, double p) {
    detail::require(p > 0.0 && p < 1.0, "generate: cascade weight must be in (0,1)");
    detail::require(levels >= 1 && levels <= 30, "generate: cascade levels must be in [1,30]");
    const std::size_t n = std::size_t{1} << levels;
    const double lp = std::log(p), lq = std::log(1.0 - p);
    const double lscale = static_cast<double>(levels) * std::numbers::ln2;
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const int ones = std::popcount(k);
        out[k] = std::exp(static_cast<double>(levels - ones) * lp + static_cast<double>(ones) * lq +
                          lscale);
    }
    return out;
}

inline std::vector<double> generate(const GeneratorSpec& spec) {
    if (spec.kind == GeneratorKind::binomial_cascade) {
        detail::require(spec.levels >= 1, "generate: cascade needs levels >= 1");
        if (spec.length != 0)
            detail::require(spec.length == (std::size_t{1} << spec.levels),
                            "generate: cascade length must equal 2^levels");
        return generate_cascade(spec.levels, spec.p);
    }
    detail::require(spec.length >= 1, "generate: length must be positive");
    std::vector<double> out(spec.length);
    Rng rng(spec.seed);
    switch (spec.kind) {
        case GeneratorKind::white:
            for (double& v : out) v = rng.gauss();
            break;
        case GeneratorKind::ar1: {
            detail::require(std::fabs(spec.phi) < 1.0, "generate: ar1 needs |phi| < 1");
            double x = rng.gauss() / std::sqrt(1.0 - spec.phi * spec.phi); // stationary start
            for (double& v : out) {
                v = x;
                x = spec.phi * x + rng.gauss();
            }
            break;
        }
        case GeneratorKind::fgn:
            return detail::generate_fgn(spec.length, spec.hurst, spec.seed);
        case GeneratorKind::weibull_renewal:
            detail::require(spec.alpha > 0.0 && spec.x0 > 0.0, "generate: weibull needs alpha, x0 > 0");
            for (double& v : out)
                v = spec.x0 * std::pow(-std::log(rng.uniform01_open_low()), 1.0 / spec.alpha);
            break;
        case GeneratorKind::pareto:
            detail::require(spec.beta > 0.0 && spec.x_min > 0.0, "generate: pareto needs beta, x_min > 0");
            for (double& v : out)
                v = spec.x_min * std::pow(rng.uniform01_open_low(), -1.0 / spec.beta);
            break;
        case GeneratorKind::binomial_cascade:
            break; // handled above
    }
    return out;
}

/// Uniform random permutation (Fisher-Yates, unbiased bounded draws); the
/// multiset of values is preserved exactly while every temporal structure is
/// destroyed.
inline std::vector<double> shuffle_surrogate(std::span<const double> values, std::uint64_t seed) {
    detail::require(!values.empty(), "shuffle_surrogate: empty input");
    std::vector<double> out(values.begin(), values.end());
    Rng rng(seed);
    for (std::size_t i = out.size() - 1; i > 0; --i) {
        const std::size_t j = rng.below(i + 1);
        std::swap(out[i], out[j]);
    }
    return out;
}

/// Analytic generalized Hurst exponent of the deterministic binomial
/// cascade: h(q) = (1 + tau(q))/q with tau(q) = -log2(p^q + (1-p)^q), and
/// the q -> 0 limit h(0) = -log2(p(1-p))/2.
inline double cascade_analytic_hq(double p, double q) {
    detail::require(p > 0.0 && p < 1.0, "cascade_analytic_hq: p must be in (0,1)");
    if (q == 0.0) return -std::log2(p * (1.0 - p)) / 2.0;
    const double tau = -std::log2(std::pow(p, q) + std::pow(1.0 - p, q));
    return (1.0 + tau) / q;
}

/// Analytic Hoelder exponent alpha(q) = d/dq [q h(q)] = tau'(q) of the same
/// cascade; its q -> +/-inf limits are -log2(max(p,1-p)) and
/// -log2(min(p,1-p)).
inline double cascade_analytic_alpha(double p, double q) {
    detail::require(p > 0.0 && p < 1.0, "cascade_analytic_alpha: p must be in (0,1)");
    const double a = std::pow(p, q), b = std::pow(1.0 - p, q);
    return -(a * std::log2(p) + b * std::log2(1.0 - p)) / (a + b);
}

} // namespace mfitt
