#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mfitt/common.hpp"
#include "mfitt/series_core.hpp"

namespace mfitt {

/// Autocorrelation sampled at integer lags k, with each lag mapped to real
/// time as tau_k = k * mean_dt (mean inter-sample interval of the source).
struct AcfResult {
    std::vector<std::int64_t> lags;
    std::vector<double> tau;
    std::vector<double> c;
};

enum class AcfEstimator {
    standard, // mean-subtracted, C(0) = 1, decays to 0
    raw       // plain <x_{i+k} x_i> / sigma^2, no mean subtraction
};

/// Log-spaced integer lags, `per_decade` points per decade from 1 to
/// max_lag, deduplicated. Direct evaluation then costs O(N * #lags).
inline std::vector<std::int64_t> log_spaced_lags(std::int64_t max_lag, int per_decade = 25) {
    detail::require(max_lag >= 1 && per_decade >= 1, "log_spaced_lags: bad arguments");
    std::vector<std::int64_t> lags;
    const double ratio = std::pow(10.0, 1.0 / per_decade);
    double x = 1.0;
    while (true) {
        auto k = static_cast<std::int64_t>(std::llround(x));
        if (k > max_lag) break;
        if (lags.empty() || k > lags.back()) lags.push_back(k);
        x *= ratio;
        if (x < static_cast<double>(lags.back()) + 1.0) x = static_cast<double>(lags.back()) + 1.0;
    }
    return lags;
}

/// Autocorrelation at the given lags. Both estimators use the biased 1/N
/// normalization (the standard one is then bounded in [-1, 1] by
/// Cauchy-Schwarz). Lags must be >= 1 and < length.
inline AcfResult acf(std::span<const double> values, std::span<const std::int64_t> lags,
                     AcfEstimator estimator = AcfEstimator::standard, double mean_dt = 1.0) {
    detail::require(values.size() >= 2, "acf: series too short");
    const auto n = static_cast<std::int64_t>(values.size());
    for (std::int64_t k : lags)
        detail::require(k >= 0 && k < n, "acf: lag " + std::to_string(k) + " out of range");

    SeriesStats st = compute_stats(values);
    const double var = st.stddev * st.stddev;
    detail::require(var > 0.0, "acf: degenerate (zero-variance) series");
    const double mu = estimator == AcfEstimator::standard ? st.mean : 0.0;

    AcfResult out;
    out.lags.assign(lags.begin(), lags.end());
    out.tau.resize(lags.size());
    out.c.resize(lags.size());
    for (std::size_t j = 0; j < lags.size(); ++j) {
        const std::int64_t k = lags[j];
        long double acc = 0.0L;
        const double* x = values.data();
        for (std::int64_t i = 0; i + k < n; ++i)
            acc += (static_cast<long double>(x[i + k]) - mu) * (static_cast<long double>(x[i]) - mu);
        out.c[j] = static_cast<double>(acc / (static_cast<long double>(n) * var));
        out.tau[j] = static_cast<double>(k) * mean_dt;
    }
    return out;
}

inline AcfResult acf(std::span<const double> values, std::int64_t max_lag,
                     AcfEstimator estimator = AcfEstimator::standard, double mean_dt = 1.0) {
    std::vector<std::int64_t> lags(static_cast<std::size_t>(max_lag));
    for (std::int64_t k = 1; k <= max_lag; ++k) lags[static_cast<std::size_t>(k - 1)] = k;
    return acf(values, lags, estimator, mean_dt);
}

} // namespace mfitt
