#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mfitt/common.hpp"

namespace mfitt {

/// A numeric series loaded from delimited text. Lines starting with '#' are
/// comments. One data column means plain values; with two or more columns
/// one holds timestamps and another the values.
struct SeriesData {
    std::vector<double> timestamps; // empty when the file had a single column
    std::vector<double> values;

    bool has_timestamps() const { return !timestamps.empty(); }
};

namespace detail {

inline bool split_columns(std::string_view line, std::vector<std::string_view>& cols) {
    cols.clear();
    std::size_t i = 0;
    const auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == ';'; };
    while (i < line.size()) {
        while (i < line.size() && is_sep(line[i])) ++i;
        std::size_t start = i;
        while (i < line.size() && !is_sep(line[i])) ++i;
        if (i > start) cols.push_back(line.substr(start, i - start));
    }
    return !cols.empty();
}

inline double parse_series_number(std::string_view sv, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec != std::errc{} || ptr != sv.data() + sv.size())
        fail("read_series: non-numeric field '" + std::string(sv) + "' at line " +
             std::to_string(line_no));
    return v;
}

} // namespace detail

/// time_col / value_col are 1-based; 0 means auto (time = column 1 when the
/// file has >= 2 columns, value = the next column after time, or column 1
/// for single-column files).
inline SeriesData read_series(std::istream& in, int time_col = 0, int value_col = 0) {
    SeriesData out;
    std::string line;
    std::vector<std::string_view> cols;
    std::size_t line_no = 0;
    int tcol = time_col, vcol = value_col;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!detail::split_columns(line, cols)) continue;
        if (tcol == 0 && vcol == 0) {
            tcol = cols.size() >= 2 ? 1 : -1;
            vcol = cols.size() >= 2 ? 2 : 1;
        } else if (vcol == 0) {
            vcol = tcol + 1;
        } else if (tcol == 0) {
            tcol = -1;
        }
        const auto need = static_cast<std::size_t>(std::max(tcol, vcol));
        if (cols.size() < need)
            detail::fail("read_series: line " + std::to_string(line_no) + " has " +
                         std::to_string(cols.size()) + " columns, need " + std::to_string(need));
        if (tcol > 0)
            out.timestamps.push_back(detail::parse_series_number(cols[static_cast<std::size_t>(tcol - 1)], line_no));
        out.values.push_back(detail::parse_series_number(cols[static_cast<std::size_t>(vcol - 1)], line_no));
    }
    detail::require(!out.values.empty(), "read_series: no data rows");
    return out;
}

inline void write_series(std::ostream& out, const std::vector<double>& timestamps,
                         const std::vector<double>& values) {
    char buf[96];
    if (timestamps.empty()) {
        for (double v : values) {
            int n = std::snprintf(buf, sizeof buf, "%.17g\n", v);
            out.write(buf, n);
        }
    } else {
        detail::require(timestamps.size() == values.size(), "write_series: length mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) {
            int n = std::snprintf(buf, sizeof buf, "%.6f %.17g\n", timestamps[i], values[i]);
            out.write(buf, n);
        }
    }
}

} // namespace mfitt
