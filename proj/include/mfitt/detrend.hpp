#pragma once

#include <cstdint>
#include <vector>

#include "mfitt/common.hpp"

namespace mfitt::detail {

// Least-squares polynomial detrending of cumulative-sum profiles over a
// fixed segment length. The fit uses discrete Gram (orthogonal) polynomials
// on the uniform grid, so coefficients are plain dot products and no linear
// system is solved per segment.
//
// The profile of a segment (v_1..v_s) is sampled at i = 0..s with the empty
// sum P_0 = 0 included. Including the starting point makes a reversed
// segment's profile an affine reflection of the original one, so reversing
// the series permutes the per-segment variances exactly instead of merely
// statistically. The segment-local profile differs from a global one only
// by a constant, which the degree>=0 fit absorbs.
class SegmentDetrender {
public:
    SegmentDetrender(std::int64_t s, int degree) : s_(s), degree_(degree) {
        require(degree >= 0, "detrend: negative degree");
        require(s >= degree + 2, "detrend: segment length must exceed degree + 1");
        const auto n = static_cast<std::size_t>(s) + 1; // profile points 0..s
        phi_.assign(static_cast<std::size_t>(degree + 1) * n, 0.0);
        inv_norm2_.assign(static_cast<std::size_t>(degree + 1), 0.0);

        // centered abscissa keeps the three-term recurrence coefficient-free
        // in its diagonal term (symmetric grid)
        std::vector<double> u(n);
        const double mid = static_cast<double>(s) / 2.0;
        for (std::size_t i = 0; i < n; ++i) u[i] = static_cast<double>(i) - mid;

        double* p0 = row(0);
        for (std::size_t i = 0; i < n; ++i) p0[i] = 1.0;
        double prev_norm2 = static_cast<double>(n);
        inv_norm2_[0] = 1.0 / prev_norm2;
        if (degree >= 1) {
            double* p1 = row(1);
            double norm2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                p1[i] = u[i];
                norm2 += u[i] * u[i];
            }
            inv_norm2_[1] = 1.0 / norm2;
            for (int k = 1; k < degree; ++k) {
                const double beta = norm2 / prev_norm2;
                const double* pk = row(k);
                const double* pk1 = row(k - 1);
                double* pn = row(k + 1);
                double next_norm2 = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    pn[i] = u[i] * pk[i] - beta * pk1[i];
                    next_norm2 += pn[i] * pn[i];
                }
                prev_norm2 = norm2;
                norm2 = next_norm2;
                inv_norm2_[static_cast<std::size_t>(k + 1)] = 1.0 / norm2;
            }
        }
        resx_.resize(n);
        resy_.resize(n);
        coef_.resize(static_cast<std::size_t>(degree + 1));
    }

    std::int64_t segment_length() const { return s_; }

    /// Detrended covariance (1/s) * sum residual_x * residual_y over one
    /// segment of s values; pass x == y for the detrended variance.
    double detrended_covariance(const double* x, const double* y) {
        profile_residual(x, resx_.data());
        const double* rx = resx_.data();
        const double* ry = rx;
        if (y != x) {
            profile_residual(y, resy_.data());
            ry = resy_.data();
        }
        const auto n = static_cast<std::size_t>(s_) + 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += rx[i] * ry[i];
        return acc / static_cast<double>(s_);
    }

private:
    double* row(int k) {
        return phi_.data() + static_cast<std::size_t>(k) * (static_cast<std::size_t>(s_) + 1);
    }

    void profile_residual(const double* seg, double* res) {
        const auto n = static_cast<std::size_t>(s_) + 1;
        double running = 0.0;
        res[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            running += seg[i - 1];
            res[i] = running;
        }
        for (int k = 0; k <= degree_; ++k) {
            const double* pk = row(k);
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += res[i] * pk[i];
            coef_[static_cast<std::size_t>(k)] = dot * inv_norm2_[static_cast<std::size_t>(k)];
        }
        for (int k = 0; k <= degree_; ++k) {
            const double c = coef_[static_cast<std::size_t>(k)];
            const double* pk = row(k);
            for (std::size_t i = 0; i < n; ++i) res[i] -= c * pk[i];
        }
    }

    std::int64_t s_;
    int degree_;
    std::vector<double> phi_;
    std::vector<double> inv_norm2_;
    std::vector<double> resx_, resy_;
    std::vector<double> coef_;
};

} // namespace mfitt::detail
