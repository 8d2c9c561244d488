#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mfitt/common.hpp"

namespace mfitt {

/// One executed trade. Timestamps are decimal seconds since the Unix epoch;
/// sub-second precision is whatever the source file states, never invented.
struct TradeRecord {
    double timestamp = 0.0;
    double price = 0.0;
    double volume = 0.0;
};

struct TickSeries {
    std::vector<TradeRecord> records;
    std::string asset_label;
    std::string venue_label;

    std::size_t size() const { return records.size(); }
};

enum class TimestampUnit { seconds, milliseconds, microseconds };

/// Layout of a delimited tick file: column positions (0-based), delimiter,
/// timestamp unit, header row presence.
struct FormatSpec {
    char delimiter = ',';
    TimestampUnit ts_unit = TimestampUnit::seconds;
    int col_timestamp = 0;
    int col_price = 1;
    int col_volume = 2;
    bool has_header = false;
};

enum class OrderingPolicy { reject, sort };

namespace detail {

inline double parse_field(std::string_view field, std::size_t line_no, const char* name) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    // tolerate leading spaces from loosely formatted exports
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    while (ptr != last && (*ptr == ' ' || *ptr == '\t' || *ptr == '\r')) ++ptr;
    if (ec != std::errc{} || ptr != last)
        fail("parse_trades: non-numeric " + std::string(name) + " field at line " +
             std::to_string(line_no) + ": '" + std::string(field) + "'");
    return value;
}

// units-per-second divisor; dividing keeps the conversion correctly rounded
inline double timestamp_divisor(TimestampUnit unit) {
    switch (unit) {
        case TimestampUnit::seconds: return 1.0;
        case TimestampUnit::milliseconds: return 1e3;
        case TimestampUnit::microseconds: return 1e6;
    }
    fail("unknown timestamp unit");
}

} // namespace detail

/// Parse a delimited tick stream into a TickSeries. Single pass, input order
/// preserved; malformed rows abort with the 1-based line number.
inline TickSeries parse_trades(std::istream& in, const FormatSpec& spec) {
    TickSeries out;
    const double divisor = detail::timestamp_divisor(spec.ts_unit);
    const int max_col = std::max({spec.col_timestamp, spec.col_price, spec.col_volume});
    std::string line;
    std::size_t line_no = 0;
    std::string_view fields[16];
    detail::require(max_col < 16, "parse_trades: column index out of range");

    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && spec.has_header) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        int nfields = 0;
        std::size_t start = 0;
        std::string_view sv(line);
        while (nfields < 16) {
            std::size_t pos = sv.find(spec.delimiter, start);
            if (pos == std::string_view::npos) {
                fields[nfields++] = sv.substr(start);
                break;
            }
            fields[nfields++] = sv.substr(start, pos - start);
            start = pos + 1;
        }
        if (nfields <= max_col)
            detail::fail("parse_trades: malformed row (expected at least " +
                         std::to_string(max_col + 1) + " fields, got " + std::to_string(nfields) +
                         ") at line " + std::to_string(line_no));

        TradeRecord rec;
        rec.timestamp = detail::parse_field(fields[spec.col_timestamp], line_no, "timestamp") / divisor;
        rec.price = detail::parse_field(fields[spec.col_price], line_no, "price");
        rec.volume = detail::parse_field(fields[spec.col_volume], line_no, "volume");
        if (!std::isfinite(rec.timestamp))
            detail::fail("parse_trades: non-finite timestamp at line " + std::to_string(line_no));
        if (!(rec.price > 0.0))
            detail::fail("parse_trades: non-positive price at line " + std::to_string(line_no));
        if (!(rec.volume >= 0.0))
            detail::fail("parse_trades: negative volume at line " + std::to_string(line_no));
        out.records.push_back(rec);
    }
    return out;
}

/// Write a TickSeries back as delimited text (timestamp in the spec's unit).
/// Round-trips through parse_trades at microsecond precision.
inline void serialize_trades(const TickSeries& series, std::ostream& out, const FormatSpec& spec) {
    const double divisor = detail::timestamp_divisor(spec.ts_unit);
    char buf[128];
    for (const TradeRecord& rec : series.records) {
        int n = std::snprintf(buf, sizeof buf, "%.6f%c%.17g%c%.17g\n", rec.timestamp * divisor,
                              spec.delimiter, rec.price, spec.delimiter, rec.volume);
        out.write(buf, n);
    }
}

/// Enforce non-decreasing timestamps. `sort` applies a stable sort; `reject`
/// throws at the first offending index. Equal timestamps are legal data.
inline TickSeries validate_ordering(TickSeries series, OrderingPolicy policy) {
    auto disordered = [](const TradeRecord& a, const TradeRecord& b) {
        return b.timestamp < a.timestamp;
    };
    auto it = std::adjacent_find(series.records.begin(), series.records.end(), disordered);
    if (it == series.records.end()) return series;
    if (policy == OrderingPolicy::reject) {
        auto idx = static_cast<std::size_t>(it - series.records.begin()) + 1;
        detail::fail("validate_ordering: out-of-order timestamp at index " + std::to_string(idx));
    }
    std::stable_sort(series.records.begin(), series.records.end(),
                     [](const TradeRecord& a, const TradeRecord& b) { return a.timestamp < b.timestamp; });
    return series;
}

} // namespace mfitt
