#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mfitt/common.hpp"
#include "mfitt/tick_ingest.hpp"

namespace mfitt {

/// Inter-transaction intervals. values[i] = t_{i+1} - t_i; timestamps[i] is
/// the interval's start time t_i (used for seasonal bucketing and rolling
/// windows).
struct IttSeries {
    std::vector<double> values;
    std::vector<double> timestamps;
    std::string asset_label;
    std::string venue_label;

    std::size_t size() const { return values.size(); }
};

struct SeriesStats {
    double mean = 0.0;
    double stddev = 0.0; // population
    std::size_t count = 0;
    double zero_fraction = 0.0;
};

/// Per-interval activity: transaction count, summed volume, log-return with
/// last-trade-carried-forward prices. Bins are half-open [k*dt, (k+1)*dt)
/// anchored at floor(first timestamp / dt) * dt; empty bins are present.
struct BinnedSeries {
    double bin_width = 0.0;
    double start_time = 0.0;
    std::vector<std::int64_t> n;
    std::vector<double> v;
    std::vector<double> r;
    std::vector<double> bin_timestamps; // bin start times

    std::size_t size() const { return n.size(); }
};

/// Moving-window statistic; empty windows carry NaN (explicit gap marker).
struct RollingSeries {
    double window_length = 0.0;
    double step = 0.0;
    std::vector<double> window_end_times;
    std::vector<double> values;
};

enum class RollingStatistic { mean, mean_abs };

inline IttSeries extract_itt(const TickSeries& series) {
    detail::require(series.size() >= 2, "extract_itt: need at least 2 ticks");
    IttSeries out;
    out.asset_label = series.asset_label;
    out.venue_label = series.venue_label;
    out.values.resize(series.size() - 1);
    out.timestamps.resize(series.size() - 1);
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        double dt = series.records[i + 1].timestamp - series.records[i].timestamp;
        if (dt < 0.0)
            detail::fail("extract_itt: timestamps decrease at index " + std::to_string(i + 1) +
                         " (run validate_ordering first)");
        out.values[i] = dt;
        out.timestamps[i] = series.records[i].timestamp;
    }
    return out;
}

/// Mean, population standard deviation, count and exact zero fraction.
inline SeriesStats compute_stats(std::span<const double> values) {
    detail::require(!values.empty(), "compute_stats: empty input");
    SeriesStats st;
    st.count = values.size();
    long double sum = 0.0L;
    std::size_t zeros = 0;
    for (double v : values) {
        sum += v;
        if (v == 0.0) ++zeros;
    }
    st.mean = static_cast<double>(sum / static_cast<long double>(st.count));
    long double ss = 0.0L;
    for (double v : values) {
        long double d = static_cast<long double>(v) - st.mean;
        ss += d * d;
    }
    st.stddev = static_cast<double>(std::sqrt(ss / static_cast<long double>(st.count)));
    st.zero_fraction = static_cast<double>(zeros) / static_cast<double>(st.count);
    return st;
}

inline BinnedSeries bin_ticks(const TickSeries& series, double dt) {
    detail::require(dt > 0.0, "bin_ticks: bin width must be positive");
    detail::require(series.size() >= 1, "bin_ticks: empty tick series");
    BinnedSeries out;
    out.bin_width = dt;
    const double t0 = std::floor(series.records.front().timestamp / dt) * dt;
    const double t_last = series.records.back().timestamp;
    out.start_time = t0;
    auto bin_of = [&](double t) {
        auto k = static_cast<std::int64_t>(std::floor((t - t0) / dt));
        return k < 0 ? std::int64_t{0} : k;
    };
    const std::int64_t nbins = bin_of(t_last) + 1;
    out.n.assign(nbins, 0);
    out.v.assign(nbins, 0.0);
    out.r.assign(nbins, 0.0);
    out.bin_timestamps.resize(nbins);
    for (std::int64_t k = 0; k < nbins; ++k) out.bin_timestamps[k] = t0 + static_cast<double>(k) * dt;

    // Counts and volumes in one pass; returns from prices carried across
    // bin boundaries (r_i = ln p(last trade in bin<=i) - ln p(last trade in bin<i)).
    double carried = series.records.front().price;
    std::int64_t cur = 0;
    double open_log = std::log(carried);
    for (const TradeRecord& rec : series.records) {
        std::int64_t k = bin_of(rec.timestamp);
        if (k != cur) {
            out.r[cur] = std::log(carried) - open_log;
            open_log = std::log(carried);
            cur = k;
        }
        out.n[k] += 1;
        out.v[k] += rec.volume;
        carried = rec.price;
    }
    out.r[cur] = std::log(carried) - open_log;
    return out;
}

/// Statistic over samples with timestamps in the closed window
/// [end - window, end]; ends advance by `step` from first_timestamp + window.
/// `sample_interval`, when known (binned input), must not exceed the window.
inline RollingSeries rolling_stat(std::span<const double> timestamps, std::span<const double> values,
                                  RollingStatistic stat, double window, double step,
                                  double sample_interval = 0.0) {
    detail::require(window > 0.0 && step > 0.0, "rolling_stat: window and step must be positive");
    detail::require(timestamps.size() == values.size(), "rolling_stat: length mismatch");
    detail::require(!timestamps.empty(), "rolling_stat: empty input");
    detail::require(sample_interval <= window,
                    "rolling_stat: window shorter than the input's sampling interval");
    detail::require(std::is_sorted(timestamps.begin(), timestamps.end()),
                    "rolling_stat: timestamps must be sorted");

    const std::size_t n = values.size();
    std::vector<long double> prefix(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
        double v = values[i];
        prefix[i + 1] = prefix[i] + (stat == RollingStatistic::mean_abs ? std::fabs(v) : v);
    }

    RollingSeries out;
    out.window_length = window;
    out.step = step;
    const double t_first = timestamps.front();
    const double t_last = timestamps.back();
    for (double end = t_first + window; end - window <= t_last; end += step) {
        auto lo = std::lower_bound(timestamps.begin(), timestamps.end(), end - window) - timestamps.begin();
        auto hi = std::upper_bound(timestamps.begin(), timestamps.end(), end) - timestamps.begin();
        out.window_end_times.push_back(end);
        if (hi == lo) {
            out.values.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
            out.values.push_back(static_cast<double>((prefix[hi] - prefix[lo]) /
                                                     static_cast<long double>(hi - lo)));
        }
    }
    return out;
}

/// Divide by the population standard deviation of the whole sequence. The
/// mean is not subtracted: ITT/count/volume series are non-negative
/// magnitudes and keep their zero anchored at zero.
inline std::vector<double> normalize_by_sigma(std::span<const double> values) {
    SeriesStats st = compute_stats(values);
    detail::require(st.stddev > 0.0, "normalize_by_sigma: zero variance");
    std::vector<double> out(values.begin(), values.end());
    for (double& v : out) v /= st.stddev;
    return out;
}

} // namespace mfitt
