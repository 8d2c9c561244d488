#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

#include "mfitt/common.hpp"

namespace mfitt {

/// Mean intraday (hour-of-day) and intraweek (day-of-week) activity pattern,
/// bucketed in UTC. Venues here trade 24/7, so no exchange session calendar
/// is involved; Monday = 0.
struct SeasonalPattern {
    std::array<double, 24> daily{};
    std::array<double, 7> weekly{};
    bool has_weekly = false;
};

enum class DeseasonMode { daily, daily_weekly };

namespace detail {

inline int hour_of_day_utc(double epoch_seconds) {
    double sec = std::fmod(epoch_seconds, 86400.0);
    if (sec < 0.0) sec += 86400.0;
    int h = static_cast<int>(sec / 3600.0);
    return h > 23 ? 23 : h;
}

inline int day_of_week_utc(double epoch_seconds) {
    // epoch day 0 (1970-01-01) was a Thursday; Monday = 0
    auto day = static_cast<std::int64_t>(std::floor(epoch_seconds / 86400.0));
    std::int64_t dow = (day + 3) % 7;
    return static_cast<int>(dow < 0 ? dow + 7 : dow);
}

template <std::size_t Buckets, typename BucketOf>
std::array<double, Buckets> bucket_means(std::span<const double> values,
                                         std::span<const double> timestamps, BucketOf bucket_of,
                                         const char* what) {
    require(values.size() == timestamps.size(), "estimate pattern: length mismatch");
    require(!values.empty(), "estimate pattern: empty input");
    std::array<long double, Buckets> sum{};
    std::array<std::size_t, Buckets> count{};
    for (std::size_t i = 0; i < values.size(); ++i) {
        int b = bucket_of(timestamps[i]);
        sum[b] += values[i];
        count[b] += 1;
    }
    std::array<double, Buckets> mean{};
    for (std::size_t b = 0; b < Buckets; ++b) {
        if (count[b] == 0)
            fail(std::string("estimate pattern: empty ") + what + " bucket " + std::to_string(b));
        mean[b] = static_cast<double>(sum[b] / static_cast<long double>(count[b]));
    }
    return mean;
}

} // namespace detail

/// Hour-of-day bucket means (UTC). Requires data spanning at least 2 days so
/// the pattern is an average over days, not a copy of one day.
inline std::array<double, 24> estimate_daily_pattern(std::span<const double> values,
                                                     std::span<const double> timestamps) {
    detail::require(timestamps.size() >= 2 && timestamps.back() - timestamps.front() >= 2 * 86400.0,
                    "estimate_daily_pattern: input must span at least 2 days");
    return detail::bucket_means<24>(values, timestamps, detail::hour_of_day_utc, "hour");
}

inline std::array<double, 7> estimate_weekly_pattern(std::span<const double> values,
                                                     std::span<const double> timestamps) {
    // a single full week is enough (> 6 days so every weekday bucket can fill)
    detail::require(timestamps.size() >= 2 && timestamps.back() - timestamps.front() > 6 * 86400.0,
                    "estimate_weekly_pattern: input must span at least one week");
    return detail::bucket_means<7>(values, timestamps, detail::day_of_week_utc, "day-of-week");
}

inline SeasonalPattern estimate_pattern(std::span<const double> values,
                                        std::span<const double> timestamps, DeseasonMode mode) {
    SeasonalPattern p;
    p.daily = estimate_daily_pattern(values, timestamps);
    if (mode == DeseasonMode::daily_weekly) {
        p.weekly = estimate_weekly_pattern(values, timestamps);
        p.has_weekly = true;
    }
    return p;
}

/// Divide each value by its hour-of-day pattern entry, then (daily+weekly
/// mode) by the day-of-week entry rescaled to mean 1 so the weekly step does
/// not shift the series level. Zeros stay zeros; zero divisors are an error.
inline std::vector<double> deseasonalize(std::span<const double> values,
                                         std::span<const double> timestamps,
                                         const SeasonalPattern& pattern, DeseasonMode mode) {
    detail::require(values.size() == timestamps.size(), "deseasonalize: length mismatch");
    for (double d : pattern.daily)
        detail::require(d > 0.0, "deseasonalize: non-positive daily pattern divisor");
    std::array<double, 7> weekly{};
    if (mode == DeseasonMode::daily_weekly) {
        detail::require(pattern.has_weekly, "deseasonalize: pattern has no weekly component");
        double mean = std::accumulate(pattern.weekly.begin(), pattern.weekly.end(), 0.0) / 7.0;
        detail::require(mean > 0.0, "deseasonalize: weekly pattern mean not positive");
        for (int d = 0; d < 7; ++d) {
            weekly[d] = pattern.weekly[d] / mean;
            detail::require(weekly[d] > 0.0, "deseasonalize: non-positive weekly pattern divisor");
        }
    }
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        double x = values[i] / pattern.daily[detail::hour_of_day_utc(timestamps[i])];
        if (mode == DeseasonMode::daily_weekly) x /= weekly[detail::day_of_week_utc(timestamps[i])];
        out[i] = x;
    }
    return out;
}

// Pattern files: one value per line, 24 lines (daily) or 7 (weekly).
inline void write_pattern(const SeasonalPattern& p, std::ostream& daily_out, std::ostream* weekly_out) {
    for (double v : p.daily) daily_out << v << '\n';
    if (weekly_out && p.has_weekly)
        for (double v : p.weekly) *weekly_out << v << '\n';
}

inline SeasonalPattern read_pattern(std::istream& daily_in, std::istream* weekly_in) {
    SeasonalPattern p;
    for (double& v : p.daily)
        detail::require(static_cast<bool>(daily_in >> v), "read_pattern: daily file needs 24 values");
    if (weekly_in) {
        for (double& v : p.weekly)
            detail::require(static_cast<bool>(*weekly_in >> v), "read_pattern: weekly file needs 7 values");
        p.has_weekly = true;
    }
    return p;
}

} // namespace mfitt
