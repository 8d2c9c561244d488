#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfitt/common.hpp"

namespace mfitt {

/// Complementary (survival) CDF sampled at the distinct sorted values.
/// p[k] = #{v > x[k]} / N, except the largest value, which is reported at
/// p = 1/N so log-scale plots keep the last sample.
struct EcdfCurve {
    std::vector<double> x;
    std::vector<double> p;
};

enum class DistKind { exponential, stretched_exponential, weibull, power_law };

inline const char* dist_kind_name(DistKind k) {
    switch (k) {
        case DistKind::exponential: return "exponential";
        case DistKind::stretched_exponential: return "stretched-exponential";
        case DistKind::weibull: return "weibull";
        case DistKind::power_law: return "power-law";
    }
    return "?";
}

/// Parametric model of a survival function. alpha/x0 parameterize the
/// Weibull family (alpha <= 1: stretched exponential, Eq.-(2) form); beta is
/// the power-law tail exponent of the survival function, P(X > x) =
/// (x/x_min)^-beta for x >= x_min.
struct DistModel {
    DistKind kind = DistKind::stretched_exponential;
    double alpha = 1.0;
    double x0 = 0.0;
    double beta = 0.0;
    double x_min = 0.0;
    // fit diagnostics
    double log_likelihood = std::numeric_limits<double>::quiet_NaN();
    double ks_distance = std::numeric_limits<double>::quiet_NaN();
    std::size_t sample_count = 0;
    std::size_t tail_count = 0;
    double excluded_zero_fraction = 0.0;
    bool converged = false;
};

inline EcdfCurve ecdf_complementary(std::span<const double> values, int points_per_decade = 0) {
    detail::require(!values.empty(), "ecdf_complementary: empty input");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());

    EcdfCurve curve;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        curve.x.push_back(sorted[i]);
        curve.p.push_back(static_cast<double>(sorted.size() - j) / n);
        i = j;
    }
    curve.p.back() = 1.0 / n; // keep the maximum visible on log axes

    if (points_per_decade > 0 && curve.x.size() > 2 && curve.x.back() > 0.0) {
        // thin interior points to a log-spaced subset for plotting
        EcdfCurve thin;
        const double lo = *std::find_if(curve.x.begin(), curve.x.end(), [](double v) { return v > 0.0; });
        double next = lo;
        const double ratio = std::pow(10.0, 1.0 / points_per_decade);
        for (std::size_t k = 0; k < curve.x.size(); ++k) {
            const bool keep = k == 0 || k == curve.x.size() - 1 || curve.x[k] >= next;
            if (!keep) continue;
            thin.x.push_back(curve.x[k]);
            thin.p.push_back(curve.p[k]);
            while (curve.x[k] >= next) next *= ratio;
        }
        return thin;
    }
    return curve;
}

/// Stretched-exponential survival function exp[-(x/x0)^alpha]; alpha = 1 is
/// the plain exponential.
inline double se_ccdf(double x, double alpha, double x0) {
    detail::require(x >= 0.0, "se_ccdf: x must be non-negative");
    detail::require(alpha > 0.0 && alpha <= 1.0, "se_ccdf: alpha must be in (0, 1]");
    detail::require(x0 > 0.0, "se_ccdf: x0 must be positive");
    return std::exp(-std::pow(x / x0, alpha));
}

inline double weibull_pdf(double x, double alpha, double x0) {
    detail::require(x > 0.0, "weibull_pdf: x must be positive");
    detail::require(alpha > 0.0 && x0 > 0.0, "weibull_pdf: parameters must be positive");
    const double z = x / x0;
    return alpha / x0 * std::pow(z, alpha - 1.0) * std::exp(-std::pow(z, alpha));
}

namespace detail {

// survival function of any model kind
inline double model_ccdf(const DistModel& m, double x) {
    switch (m.kind) {
        case DistKind::exponential: return std::exp(-x / m.x0);
        case DistKind::stretched_exponential:
        case DistKind::weibull: return std::exp(-std::pow(x / m.x0, m.alpha));
        case DistKind::power_law: return x <= m.x_min ? 1.0 : std::pow(x / m.x_min, -m.beta);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// Weibull profile-likelihood score in alpha; zero at the MLE. Positive near
// alpha -> 0+, strictly positive everywhere for degenerate (all-equal)
// samples.
inline double weibull_profile_score(std::span<const double> x, double alpha, double sum_log) {
    long double sa = 0.0L, sal = 0.0L;
    for (double v : x) {
        const long double t = std::exp(alpha * std::log(v));
        sa += t;
        sal += t * std::log(v);
    }
    const auto n = static_cast<long double>(x.size());
    return static_cast<double>(n / alpha + sum_log - n * sal / sa);
}

} // namespace detail

/// Weibull / stretched-exponential maximum likelihood. Zeros cannot enter
/// the likelihood (the density is singular at 0 for alpha < 1); they are
/// excluded and their fraction reported, which matters for ITT data where
/// the null fraction can reach tens of percent.
inline DistModel fit_se_mle(std::span<const double> values) {
    std::vector<double> x;
    x.reserve(values.size());
    std::size_t zeros = 0;
    for (double v : values) {
        detail::require(v >= 0.0, "fit_se_mle: negative value in sample");
        if (v == 0.0)
            ++zeros;
        else
            x.push_back(v);
    }
    detail::require(x.size() >= 100, "fit_se_mle: need at least 100 positive samples");

    // scale-invariance of alpha: work on x / mean(x) to keep powers tame
    long double mean = 0.0L;
    for (double v : x) mean += v;
    mean /= static_cast<long double>(x.size());
    const double scale = static_cast<double>(mean);
    for (double& v : x) v /= scale;

    double sum_log = 0.0;
    {
        long double acc = 0.0L;
        for (double v : x) acc += std::log(v);
        sum_log = static_cast<double>(acc);
    }

    DistModel model;
    model.sample_count = values.size();
    model.excluded_zero_fraction = static_cast<double>(zeros) / static_cast<double>(values.size());

    double lo = 1e-3, hi = 64.0;
    const double f_lo = detail::weibull_profile_score(x, lo, sum_log);
    const double f_hi = detail::weibull_profile_score(x, hi, sum_log);
    if (!(f_lo > 0.0 && f_hi < 0.0))
        detail::fail("fit_se_mle: degenerate sample (profile likelihood has no root)");
    for (int iter = 0; iter < 200 && hi - lo > 1e-12 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (detail::weibull_profile_score(x, mid, sum_log) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double alpha = 0.5 * (lo + hi);

    long double sa = 0.0L;
    for (double v : x) sa += std::exp(alpha * std::log(v));
    const double x0_scaled = std::pow(static_cast<double>(sa / static_cast<long double>(x.size())), 1.0 / alpha);

    model.alpha = alpha;
    model.x0 = x0_scaled * scale;
    model.kind = alpha <= 1.0 ? DistKind::stretched_exponential : DistKind::weibull;
    model.converged = true;

    long double ll = 0.0L;
    for (double v : x) {
        const double z = v / x0_scaled;
        ll += std::log(alpha / model.x0) + (alpha - 1.0) * std::log(z) - std::pow(z, alpha);
    }
    model.log_likelihood = static_cast<double>(ll);
    return model;
}

namespace detail {

// Hill-type continuous MLE for the survival-function exponent over the tail
// x > x_min, plus the Kolmogorov-Smirnov distance of that tail to the fit.
// `tail` must be sorted ascending and strictly above x_min.
inline std::pair<double, double> powerlaw_tail_mle(std::span<const double> tail, double x_min) {
    const auto n = static_cast<double>(tail.size());
    require(tail.front() != tail.back(), "fit_powerlaw_tail: all tail values equal");
    long double acc = 0.0L;
    for (double v : tail) acc += std::log(v / x_min);
    require(acc > 0.0L, "fit_powerlaw_tail: all tail values equal x_min");
    const double beta = static_cast<double>(n / acc);
    double ks = 0.0;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        const double model = std::pow(tail[i] / x_min, -beta);
        const double emp_hi = (n - static_cast<double>(i)) / n;
        const double emp_lo = (n - static_cast<double>(i) - 1.0) / n;
        ks = std::max({ks, std::fabs(model - emp_hi), std::fabs(model - emp_lo)});
    }
    return {beta, ks};
}

} // namespace detail

/// Power-law tail fit: survival function (x/x_min)^-beta over x > x_min.
/// With x_min given, beta is the continuous MLE beta = n / sum ln(x/x_min).
/// Without it, x_min is chosen by minimizing the KS distance between the
/// tail sample and its own fit over a grid of candidate thresholds.
inline DistModel fit_powerlaw_tail(std::span<const double> values,
                                   std::optional<double> x_min = std::nullopt) {
    std::vector<double> sorted;
    sorted.reserve(values.size());
    for (double v : values)
        if (v > 0.0) sorted.push_back(v);
    std::sort(sorted.begin(), sorted.end());
    detail::require(!sorted.empty(), "fit_powerlaw_tail: no positive samples");

    DistModel model;
    model.kind = DistKind::power_law;
    model.sample_count = values.size();

    auto tail_above = [&](double threshold) {
        auto it = std::upper_bound(sorted.begin(), sorted.end(), threshold);
        return std::span<const double>(&*it, static_cast<std::size_t>(sorted.end() - it));
    };

    if (x_min.has_value()) {
        detail::require(*x_min > 0.0, "fit_powerlaw_tail: x_min must be positive");
        auto tail = tail_above(*x_min);
        detail::require(tail.size() >= 100, "fit_powerlaw_tail: fewer than 100 samples above x_min");
        auto [beta, ks] = detail::powerlaw_tail_mle(tail, *x_min);
        model.beta = beta;
        model.x_min = *x_min;
        model.ks_distance = ks;
        model.tail_count = tail.size();
        model.converged = true;
        return model;
    }

    // Candidate thresholds: distinct sample values, log-thinned to <= 200,
    // keeping at least 100 tail points above each.
    detail::require(sorted.size() >= 200, "fit_powerlaw_tail: too few samples for x_min search");
    const std::size_t max_idx = sorted.size() - 100;
    std::vector<double> candidates;
    {
        double last = -1.0;
        const double lo = sorted.front(), hi = sorted[max_idx];
        const int steps = 200;
        for (int k = 0; k <= steps; ++k) {
            const double c = lo * std::pow(hi / lo, static_cast<double>(k) / steps);
            if (c > last) {
                candidates.push_back(c);
                last = c;
            }
        }
    }
    double best_ks = std::numeric_limits<double>::infinity();
    for (double c : candidates) {
        auto tail = tail_above(c);
        if (tail.size() < 100 || tail.front() == tail.back()) continue;
        auto [beta, ks] = detail::powerlaw_tail_mle(tail, c);
        if (ks < best_ks) {
            best_ks = ks;
            model.beta = beta;
            model.x_min = c;
            model.ks_distance = ks;
            model.tail_count = tail.size();
        }
    }
    detail::require(std::isfinite(best_ks), "fit_powerlaw_tail: x_min search found no viable tail");
    model.converged = true;
    return model;
}

/// Survival curve of a model on a grid. When the model's scale parameter is
/// absent (x0 or x_min <= 0), it is calibrated in closed form so the curve
/// passes through the supplied (anchor_x, anchor_p) point -- the way the
/// fixed-alpha guide curves are pinned to an empirical CCDF.
inline std::vector<double> model_overlay(DistModel model, std::span<const double> x_grid,
                                         std::optional<std::pair<double, double>> anchor = std::nullopt) {
    detail::require(!x_grid.empty(), "model_overlay: empty grid");
    const bool needs_scale = model.kind == DistKind::power_law ? model.x_min <= 0.0 : model.x0 <= 0.0;
    if (needs_scale) {
        detail::require(anchor.has_value(), "model_overlay: model has no scale and no anchor given");
        auto [ax, ap] = *anchor;
        detail::require(ax > 0.0 && ap > 0.0 && ap < 1.0, "model_overlay: bad anchor point");
        if (model.kind == DistKind::power_law) {
            detail::require(model.beta > 0.0, "model_overlay: power-law needs beta > 0");
            model.x_min = ax * std::pow(ap, 1.0 / model.beta);
        } else {
            if (model.kind == DistKind::exponential) model.alpha = 1.0;
            detail::require(model.alpha > 0.0, "model_overlay: needs alpha > 0");
            model.x0 = ax / std::pow(-std::log(ap), 1.0 / model.alpha);
        }
    }
    std::vector<double> out(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) out[i] = detail::model_ccdf(model, x_grid[i]);
    return out;
}

/// Anchor point for overlay calibration: the ecdf point whose survival
/// probability is closest to 1 - quantile (median by default).
inline std::pair<double, double> anchor_from_ecdf(const EcdfCurve& curve, double quantile = 0.5) {
    detail::require(!curve.x.empty(), "anchor_from_ecdf: empty curve");
    detail::require(quantile > 0.0 && quantile < 1.0, "anchor_from_ecdf: quantile must be in (0,1)");
    const double target = 1.0 - quantile;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.p.size(); ++i) {
        const double d = std::fabs(curve.p[i] - target);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return {curve.x[best], curve.p[best]};
}

} // namespace mfitt
