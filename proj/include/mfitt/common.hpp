#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace mfitt {

/// Error type thrown by every operation in this library. The message always
/// names the offending operation and, where available, the offending input
/// (line number, index, scale).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
}

} // namespace detail

/// Longest run of consecutive zeros (exact comparison) in a sequence.
inline std::size_t longest_zero_run(std::span<const double> values) {
    std::size_t best = 0, run = 0;
    for (double v : values) {
        if (v == 0.0) {
            ++run;
            if (run > best) best = run;
        } else {
            run = 0;
        }
    }
    return best;
}

} // namespace mfitt
