#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mfitt/common.hpp"
#include "mfitt/detrend.hpp"
#include "mfitt/parallel.hpp"

namespace mfitt {

struct MfdfaConfig {
    std::vector<double> q_grid;       // default -4..4 step 0.25
    std::vector<std::int64_t> s_grid; // strictly increasing integer scales
    int detrend_degree = 2;
    double variance_floor = 1e-15; // segments with |f2| below are skipped
};

/// Family of fluctuation functions F_q(s). For the cross variant F carries
/// the sign of the q-order covariance mean. Segment exclusion is
/// q-independent (|f2| < variance_floor), so at fixed s the values are
/// generalized means over one common segment set.
struct FluctuationSurface {
    std::vector<double> q_grid;
    std::vector<std::int64_t> s_grid;
    std::vector<double> F;                       // row-major [q][s]
    std::vector<std::int64_t> segment_counts;    // M_s = 2*floor(N/s), per scale
    std::vector<std::int64_t> skipped_segments;  // per scale

    double at(std::size_t qi, std::size_t si) const { return F[qi * s_grid.size() + si]; }
};

struct GeneralizedHurst {
    std::vector<double> q_grid;
    std::vector<double> h;
    std::vector<double> fit_r2;
    double fit_lo = 0.0, fit_hi = 0.0; // scale range used
};

struct SingularitySpectrum {
    std::vector<double> q_grid;
    std::vector<double> alpha;
    std::vector<double> f_alpha;
    double alpha_q0 = 0.0; // alpha at q = 0
    double width = 0.0;    // alpha_max - alpha_min
    double asymmetry = std::numeric_limits<double>::quiet_NaN();
};

inline std::vector<double> default_q_grid(double lo = -4.0, double hi = 4.0, double step = 0.25) {
    detail::require(step > 0.0 && hi > lo, "default_q_grid: bad range");
    std::vector<double> q;
    const int n = static_cast<int>(std::llround((hi - lo) / step));
    for (int i = 0; i <= n; ++i) q.push_back(lo + i * step);
    return q;
}

/// Log-spaced integer scales, `per_decade` points per decade, deduplicated.
inline std::vector<std::int64_t> log_spaced_scales(std::int64_t s_min, std::int64_t s_max,
                                                   int per_decade = 20) {
    detail::require(s_min >= 2 && s_max >= s_min && per_decade >= 1, "log_spaced_scales: bad range");
    std::vector<std::int64_t> s;
    const double ratio = std::pow(10.0, 1.0 / per_decade);
    double x = static_cast<double>(s_min);
    while (true) {
        auto v = static_cast<std::int64_t>(std::llround(x));
        if (v > s_max) break;
        if (s.empty() || v > s.back()) s.push_back(v);
        x *= ratio;
        if (x < static_cast<double>(s.back()) + 1.0) x = static_cast<double>(s.back()) + 1.0;
    }
    if (s.empty() || s.back() != s_max) s.push_back(s_max);
    return s;
}

/// Smallest admissible scale: one more than the longest run of zeros, but
/// never below degree + 2 (the fit needs more points than coefficients).
inline std::int64_t min_scale(std::span<const double> values, int detrend_degree = 2) {
    detail::require(!values.empty(), "min_scale: empty series");
    const std::size_t run = longest_zero_run(values);
    detail::require(run < values.size(), "min_scale: all-zero series");
    const auto floor_scale = static_cast<std::int64_t>(detrend_degree) + 2;
    const auto from_zeros = static_cast<std::int64_t>(run) + 1;
    return std::max(floor_scale, from_zeros);
}

/// Largest scale: a tenth of the series length.
inline std::int64_t max_scale(std::size_t length, int detrend_degree = 2) {
    const auto need = static_cast<std::size_t>(10) * (static_cast<std::size_t>(detrend_degree) + 2);
    detail::require(length >= need, "max_scale: series too short for the scale rules (length " +
                                        std::to_string(length) + " < " + std::to_string(need) + ")");
    return static_cast<std::int64_t>(length / 10);
}

namespace detail {

inline void validate_config(const MfdfaConfig& cfg, std::size_t n) {
    require(!cfg.q_grid.empty(), "mfdfa: empty q grid");
    require(!cfg.s_grid.empty(), "mfdfa: empty scale grid");
    require(cfg.variance_floor > 0.0, "mfdfa: variance floor must be positive");
    for (std::size_t i = 1; i < cfg.s_grid.size(); ++i)
        require(cfg.s_grid[i] > cfg.s_grid[i - 1], "mfdfa: scale grid must be strictly increasing");
    require(cfg.s_grid.front() >= cfg.detrend_degree + 2,
            "mfdfa: smallest scale must be at least detrend degree + 2");
    require(static_cast<std::size_t>(cfg.s_grid.back()) * 2 <= n,
            "mfdfa: largest scale exceeds half the series length (" +
                std::to_string(cfg.s_grid.back()) + " vs length " + std::to_string(n) + ")");
}

// Shared engine for Eq.-(6)-style and signed cross fluctuation functions.
// Detrended (co)variances are stored per segment in a fixed order (forward
// segments then backward), so the q-reduction is schedule-independent.
inline FluctuationSurface fluctuation_surface_impl(std::span<const double> x,
                                                   std::span<const double> y,
                                                   const MfdfaConfig& cfg, int threads,
                                                   bool signed_mode) {
    require(x.size() == y.size(), "cross_fluctuation: length mismatch");
    validate_config(cfg, x.size());
    const auto n = static_cast<std::int64_t>(x.size());
    const std::size_t nq = cfg.q_grid.size();
    const std::size_t ns = cfg.s_grid.size();

    FluctuationSurface surf;
    surf.q_grid = cfg.q_grid;
    surf.s_grid = cfg.s_grid;
    surf.F.assign(nq * ns, std::numeric_limits<double>::quiet_NaN());
    surf.segment_counts.assign(ns, 0);
    surf.skipped_segments.assign(ns, 0);
    std::vector<std::string> scale_errors(ns);

    parallel_for(ns, threads, [&](std::size_t si) {
        const std::int64_t s = cfg.s_grid[si];
        const std::int64_t half = n / s;
        const std::int64_t m_total = 2 * half;
        SegmentDetrender det(s, cfg.detrend_degree);

        std::vector<double> f2(static_cast<std::size_t>(m_total));
        for (std::int64_t v = 0; v < half; ++v) {
            const auto off = static_cast<std::size_t>(v * s);
            f2[static_cast<std::size_t>(v)] = det.detrended_covariance(x.data() + off, y.data() + off);
        }
        for (std::int64_t v = 0; v < half; ++v) {
            const auto off = static_cast<std::size_t>(n - (v + 1) * s);
            f2[static_cast<std::size_t>(half + v)] =
                det.detrended_covariance(x.data() + off, y.data() + off);
        }

        // keep only segments above the variance floor; the exclusion is
        // q-independent so every F at this scale is a generalized mean over
        // the same set (this is what makes F monotone in q)
        std::vector<double> logs;
        std::vector<bool> negative;
        logs.reserve(f2.size());
        double sign_acc = 0.0;
        for (double f : f2) {
            if (std::fabs(f) < cfg.variance_floor) continue;
            logs.push_back(std::log(std::fabs(f)));
            negative.push_back(f < 0.0);
            sign_acc += f;
        }
        const auto included = static_cast<std::int64_t>(logs.size());
        surf.segment_counts[si] = m_total;
        surf.skipped_segments[si] = m_total - included;
        if (included == 0) {
            scale_errors[si] = "mfdfa: all " + std::to_string(m_total) + " segments at scale " +
                               std::to_string(s) + " fell below the variance floor";
            return;
        }

        for (std::size_t qi = 0; qi < nq; ++qi) {
            const double q = cfg.q_grid[qi];
            double value;
            if (q == 0.0) {
                // logarithmic-mean limit of Eq. (6)
                double log_sum = 0.0;
                for (double l : logs) log_sum += l;
                value = std::exp(log_sum / (2.0 * static_cast<double>(included)));
                if (signed_mode && sign_acc < 0.0) value = -value;
            } else {
                double sum = 0.0;
                for (std::size_t v = 0; v < logs.size(); ++v) {
                    const double term = std::exp(0.5 * q * logs[v]);
                    sum += (signed_mode && negative[v]) ? -term : term;
                }
                const double mean = sum / static_cast<double>(included);
                value = mean == 0.0 ? 0.0
                                    : std::copysign(std::exp(std::log(std::fabs(mean)) / q), mean);
            }
            surf.F[qi * ns + si] = value;
        }
    });

    for (const std::string& err : scale_errors)
        if (!err.empty()) fail(err);
    return surf;
}

} // namespace detail

/// Fluctuation surface F_q(s): segments of length s taken from both series
/// ends, segment-wise cumulative-sum profiles detrended by a least-squares
/// polynomial of the configured degree, variances reduced by the
/// generalized mean of order q/2 (logarithmic mean at q = 0).
inline FluctuationSurface fluctuation_surface(std::span<const double> values, const MfdfaConfig& cfg,
                                              int threads = 1) {
    return detail::fluctuation_surface_impl(values, values, cfg, threads, false);
}

/// Per-q ordinary least squares of ln F on ln s over scales in
/// [fit_lo, fit_hi]; the slope is the generalized Hurst exponent h(q).
inline GeneralizedHurst fit_hurst(const FluctuationSurface& surf, double fit_lo, double fit_hi) {
    detail::require(fit_lo > 0.0 && fit_hi > fit_lo, "fit_hurst: bad fit range");
    std::vector<std::size_t> idx;
    for (std::size_t si = 0; si < surf.s_grid.size(); ++si) {
        const double s = static_cast<double>(surf.s_grid[si]);
        if (s >= fit_lo && s <= fit_hi) idx.push_back(si);
    }
    detail::require(idx.size() >= 4, "fit_hurst: fit range contains fewer than 4 scales");

    GeneralizedHurst gh;
    gh.q_grid = surf.q_grid;
    gh.fit_lo = fit_lo;
    gh.fit_hi = fit_hi;
    gh.h.resize(surf.q_grid.size());
    gh.fit_r2.resize(surf.q_grid.size());

    std::vector<double> lx(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) lx[j] = std::log(static_cast<double>(surf.s_grid[idx[j]]));

    for (std::size_t qi = 0; qi < surf.q_grid.size(); ++qi) {
        long double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::vector<double> ly(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const double f = surf.at(qi, idx[j]);
            detail::require(std::isfinite(f) && f > 0.0,
                            "fit_hurst: undefined F value inside fit range at q=" +
                                std::to_string(surf.q_grid[qi]));
            ly[j] = std::log(f);
            sx += lx[j];
            sy += ly[j];
            sxx += lx[j] * lx[j];
            sxy += lx[j] * ly[j];
        }
        const auto m = static_cast<long double>(idx.size());
        const long double den = sxx - sx * sx / m;
        const long double slope = (sxy - sx * sy / m) / den;
        const long double intercept = (sy - slope * sx) / m;
        long double ss_res = 0, ss_tot = 0;
        const long double mean_y = sy / m;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const long double e = ly[j] - (intercept + slope * lx[j]);
            const long double d = ly[j] - mean_y;
            ss_res += e * e;
            ss_tot += d * d;
        }
        gh.h[qi] = static_cast<double>(slope);
        gh.fit_r2[qi] = ss_tot > 0.0L ? static_cast<double>(1.0L - ss_res / ss_tot) : 1.0;
    }
    return gh;
}

/// Legendre-transform representation: alpha = h + q h', f = q(alpha - h) + 1,
/// with h'(q) from central finite differences (one-sided at the grid ends).
inline SingularitySpectrum singularity_spectrum(const GeneralizedHurst& gh) {
    const std::size_t n = gh.q_grid.size();
    detail::require(n >= 3, "singularity_spectrum: need at least 3 q points");
    SingularitySpectrum sp;
    sp.q_grid = gh.q_grid;
    sp.alpha.resize(n);
    sp.f_alpha.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i == n - 1 ? n - 1 : i + 1;
        const double dh = (gh.h[hi] - gh.h[lo]) / (gh.q_grid[hi] - gh.q_grid[lo]);
        detail::require(std::isfinite(dh), "singularity_spectrum: non-finite derivative");
        sp.alpha[i] = gh.h[i] + gh.q_grid[i] * dh;
        sp.f_alpha[i] = gh.q_grid[i] * (sp.alpha[i] - gh.h[i]) + 1.0;
    }
    const auto [mn, mx] = std::minmax_element(sp.alpha.begin(), sp.alpha.end());
    sp.width = *mx - *mn;

    // alpha at q = 0: exact grid point when present, else linear interpolation
    sp.alpha_q0 = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < n; ++i)
        if (gh.q_grid[i] == 0.0) sp.alpha_q0 = sp.alpha[i];
    if (!std::isfinite(sp.alpha_q0)) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double a = gh.q_grid[i], b = gh.q_grid[i + 1];
            if (a < 0.0 && b > 0.0)
                sp.alpha_q0 = sp.alpha[i] + (0.0 - a) / (b - a) * (sp.alpha[i + 1] - sp.alpha[i]);
        }
    }
    if (sp.width > 0.0 && std::isfinite(sp.alpha_q0)) {
        const double left = sp.alpha_q0 - *mn;
        const double right = *mx - sp.alpha_q0;
        sp.asymmetry = (left - right) / (left + right);
    }
    return sp;
}

/// A = (dL - dR)/(dL + dR) with dL = alpha(0) - alpha_min and
/// dR = alpha_max - alpha(0). Negative A means the right branch (q < 0,
/// small fluctuations) is the longer one.
inline double spectrum_asymmetry(const SingularitySpectrum& sp) {
    bool has_neg = false, has_pos = false;
    for (double q : sp.q_grid) {
        has_neg = has_neg || q < 0.0;
        has_pos = has_pos || q > 0.0;
    }
    detail::require(has_neg && has_pos, "spectrum_asymmetry: need both q<0 and q>0 branches");
    detail::require(!sp.alpha.empty() && std::isfinite(sp.alpha_q0),
                    "spectrum_asymmetry: undefined alpha(0)");
    const auto [mn, mx] = std::minmax_element(sp.alpha.begin(), sp.alpha.end());
    detail::require(*mx > *mn, "spectrum_asymmetry: zero total width");
    const double left = sp.alpha_q0 - *mn;
    const double right = *mx - sp.alpha_q0;
    return (left - right) / (left + right);
}

} // namespace mfitt
