#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mfitt/common.hpp"
#include "mfitt/mfdfa.hpp"

namespace mfitt {

/// q-dependent detrended cross-correlation coefficient, either across
/// scales at fixed q, or across moving windows at fixed (q, s). For q <= 0
/// the coefficient may leave [-1, 1]; out_of_unit_range flags that the
/// values need the more careful reading.
struct RhoResult {
    double q = 2.0;
    std::vector<std::int64_t> s_grid;
    std::vector<double> rho;
    bool out_of_unit_range = false;
    // rolling mode
    std::vector<double> window_end_times;
    std::vector<double> rho_t; // NaN marks a window that failed the sample precondition
    std::int64_t scale = 0;
};

/// Detrended covariance surface of two series: per segment, both profiles
/// are detrended independently and the covariance replaces the variance;
/// F carries the sign of the q-order mean so it stays continuous.
inline FluctuationSurface cross_fluctuation(std::span<const double> x, std::span<const double> y,
                                            const MfdfaConfig& cfg, int threads = 1) {
    return detail::fluctuation_surface_impl(x, y, cfg, threads, true);
}

namespace detail {

// rho_q(s) = S_xy / sqrt(S_xx S_yy) with S the q-order (co)variance means,
// recovered from the stored F values: S = sign(F) |F|^q for q != 0 and
// S = F^2 at q = 0 (the logarithmic mean). Using one transform on all three
// surfaces keeps rho(x,x) = 1 exact.
inline double rho_from_f(double f_xy, double f_xx, double f_yy, double q, std::int64_t s) {
    auto to_s = [q](double f) {
        if (q == 0.0) return f * std::fabs(f);
        if (f == 0.0) return 0.0;
        return std::copysign(std::exp(q * std::log(std::fabs(f))), f);
    };
    const double num = to_s(f_xy);
    const double den_x = to_s(f_xx);
    const double den_y = to_s(f_yy);
    require(den_x > 0.0 && den_y > 0.0,
            "rho_q: zero denominator fluctuation at scale " + std::to_string(s));
    return num / std::sqrt(den_x * den_y);
}

} // namespace detail

/// rho_q(s) over the configured scale grid for a single q.
inline RhoResult rho_q(std::span<const double> x, std::span<const double> y, const MfdfaConfig& cfg,
                       double q, int threads = 1) {
    MfdfaConfig local = cfg;
    local.q_grid = {q};
    FluctuationSurface sxy = cross_fluctuation(x, y, local, threads);
    FluctuationSurface sxx = cross_fluctuation(x, x, local, threads);
    FluctuationSurface syy = cross_fluctuation(y, y, local, threads);

    RhoResult out;
    out.q = q;
    out.s_grid = local.s_grid;
    out.rho.resize(local.s_grid.size());
    for (std::size_t si = 0; si < local.s_grid.size(); ++si) {
        out.rho[si] =
            detail::rho_from_f(sxy.at(0, si), sxx.at(0, si), syy.at(0, si), q, local.s_grid[si]);
        if (std::fabs(out.rho[si]) > 1.0 + 1e-9) out.out_of_unit_range = true;
    }
    return out;
}

/// rho_q at one (q, s) recomputed on each moving window of the paired
/// samples. Windows with fewer than 10*s samples emit NaN gaps.
inline RhoResult rolling_rho(std::span<const double> x, std::span<const double> y,
                             std::span<const double> timestamps, double q, std::int64_t s,
                             double window, double step, int detrend_degree = 2,
                             double variance_floor = 1e-15, int threads = 1) {
    detail::require(window > 0.0 && step > 0.0, "rolling_rho: window and step must be positive");
    detail::require(x.size() == y.size() && x.size() == timestamps.size(),
                    "rolling_rho: length mismatch");
    detail::require(!timestamps.empty(), "rolling_rho: empty input");
    detail::require(std::is_sorted(timestamps.begin(), timestamps.end()),
                    "rolling_rho: timestamps must be sorted");

    RhoResult out;
    out.q = q;
    out.scale = s;
    const double t_first = timestamps.front();
    const double t_last = timestamps.back();
    for (double end = t_first + window; end - window <= t_last; end += step)
        out.window_end_times.push_back(end);
    out.rho_t.assign(out.window_end_times.size(), std::numeric_limits<double>::quiet_NaN());

    detail::parallel_for(out.window_end_times.size(), threads, [&](std::size_t w) {
        const double end = out.window_end_times[w];
        auto lo = std::lower_bound(timestamps.begin(), timestamps.end(), end - window) -
                  timestamps.begin();
        auto hi = std::upper_bound(timestamps.begin(), timestamps.end(), end) - timestamps.begin();
        const auto count = static_cast<std::int64_t>(hi - lo);
        if (count < 10 * s) return; // gap
        MfdfaConfig cfg;
        cfg.q_grid = {q};
        cfg.s_grid = {s};
        cfg.detrend_degree = detrend_degree;
        cfg.variance_floor = variance_floor;
        const auto ulo = static_cast<std::size_t>(lo);
        const auto ucount = static_cast<std::size_t>(count);
        try {
            out.rho_t[w] = rho_q(x.subspan(ulo, ucount), y.subspan(ulo, ucount), cfg, q, 1).rho[0];
        } catch (const Error&) {
            // degenerate window (all segments skipped or zero denominator): gap
        }
    });
    return out;
}

} // namespace mfitt
