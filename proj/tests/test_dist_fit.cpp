#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mfitt/dist_fit.hpp"
#include "mfitt/series_core.hpp"
#include "mfitt/synth.hpp"
#include "oracles.hpp"

using namespace mfitt;

TEST(Ecdf, CountingConvention) {
    EcdfCurve c = ecdf_complementary(std::vector<double>{1, 2, 3, 4});
    ASSERT_EQ(c.x.size(), 4u);
    EXPECT_DOUBLE_EQ(c.x[1], 2.0);
    EXPECT_DOUBLE_EQ(c.p[1], 0.5); // #{v > 2} / 4
    EXPECT_DOUBLE_EQ(c.p[0], 0.75);
    EXPECT_DOUBLE_EQ(c.p[3], 0.25); // last point kept at 1/N, not 0
}

TEST(Ecdf, AllEqualValuesDegenerate) {
    EcdfCurve c = ecdf_complementary(std::vector<double>{7, 7, 7, 7, 7});
    ASSERT_EQ(c.x.size(), 1u);
    EXPECT_DOUBLE_EQ(c.x[0], 7.0);
    EXPECT_DOUBLE_EQ(c.p[0], 0.2); // final-sample convention: 1/N
    EXPECT_THROW(ecdf_complementary(std::vector<double>{}), Error);
}

TEST(Ecdf, MatchesBruteForceCountingAtProbes) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::weibull_renewal;
    spec.alpha = 0.7;
    spec.x0 = 1.0;
    spec.length = 100'000;
    spec.seed = 10;
    auto v = generate(spec);
    EcdfCurve c = ecdf_complementary(v);
    for (std::size_t k = 0; k + 1 < c.x.size(); k += c.x.size() / 20) {
        EXPECT_DOUBLE_EQ(c.p[k], oracle::naive_ccdf_at(v, c.x[k])); // exact equality
    }
    for (std::size_t k = 1; k < c.p.size(); ++k) {
        ASSERT_GT(c.x[k], c.x[k - 1]);
        if (k + 1 < c.p.size()) ASSERT_LT(c.p[k], c.p[k - 1]); // strictly decreasing
        ASSERT_GT(c.p[k], 0.0);
    }
}

TEST(Ecdf, OrderIndependenceAndSigmaCommutation) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::pareto;
    spec.beta = 2.5;
    spec.length = 20'000;
    spec.seed = 3;
    auto v = generate(spec);
    auto shuffled = shuffle_surrogate(v, 5);
    EcdfCurve a = ecdf_complementary(v);
    EcdfCurve b = ecdf_complementary(shuffled);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.p, b.p);

    // normalization rescales abscissae, leaves survival probabilities alone
    const double sigma = compute_stats(v).stddev;
    EcdfCurve n = ecdf_complementary(normalize_by_sigma(v));
    ASSERT_EQ(n.p.size(), a.p.size());
    EXPECT_EQ(n.p, a.p);
    for (std::size_t i = 0; i < a.x.size(); i += 173)
        EXPECT_NEAR(n.x[i], a.x[i] / sigma, 1e-12 * std::fabs(n.x[i]));
}

TEST(Ecdf, LogDownsamplingKeepsEndpoints) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::weibull_renewal;
    spec.alpha = 1.0;
    spec.x0 = 1.0;
    spec.length = 50'000;
    spec.seed = 8;
    auto v = generate(spec);
    EcdfCurve full = ecdf_complementary(v);
    EcdfCurve thin = ecdf_complementary(v, 10);
    EXPECT_LT(thin.x.size(), full.x.size() / 10);
    EXPECT_DOUBLE_EQ(thin.x.front(), full.x.front());
    EXPECT_DOUBLE_EQ(thin.x.back(), full.x.back());
}

TEST(SeCcdf, ClosedFormPoints) {
    for (double alpha : {0.3, 0.5, 1.0})
        EXPECT_DOUBLE_EQ(se_ccdf(2.5, alpha, 2.5), std::exp(-1.0)); // x = x0
    EXPECT_DOUBLE_EQ(se_ccdf(0.0, 0.7, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(se_ccdf(3.0, 1.0, 1.0), std::exp(-3.0));
    EXPECT_THROW(se_ccdf(-1.0, 0.5, 1.0), Error);
    EXPECT_THROW(se_ccdf(1.0, 1.5, 1.0), Error); // alpha must be <= 1
    EXPECT_THROW(se_ccdf(1.0, 0.5, 0.0), Error);
}

TEST(SeCcdf, MonotoneDecreasing) {
    double prev = 1.0;
    for (double x = 0.1; x < 50.0; x *= 1.5) {
        const double p = se_ccdf(x, 0.6, 2.0);
        ASSERT_LT(p, prev);
        prev = p;
    }
}

TEST(WeibullPdf, ExponentialCaseAndDomain) {
    for (double x : {0.1, 1.0, 5.0}) EXPECT_NEAR(weibull_pdf(x, 1.0, 1.0), std::exp(-x), 1e-15);
    EXPECT_THROW(weibull_pdf(0.0, 0.5, 1.0), Error);
    EXPECT_THROW(weibull_pdf(1.0, -1.0, 1.0), Error);
    EXPECT_GE(weibull_pdf(17.0, 0.4, 2.0), 0.0);
}

// quadrature oracle: the density integrates over (0, 50 x0) to the mass of
// that interval, 1 - exp(-50^alpha) -- which is 1 to << 1e-6 for alpha >= 1
// and 1 - 8.5e-4 for alpha = 0.5. The integrand is singular at 0 for
// alpha < 1, so integrate in u with x = u^4 (graded mesh, smooth in u).
TEST(WeibullPdf, IntegratesToIntervalMass) {
    for (double alpha : {0.5, 1.0, 2.0}) {
        const double x0 = 1.7;
        const double umax = std::pow(50.0 * x0, 0.25);
        const std::size_t steps = 400'000;
        const double h = umax / static_cast<double>(steps);
        long double acc = 0.0L;
        for (std::size_t k = 0; k <= steps; ++k) {
            const double u = h * static_cast<double>(k);
            const double x = u * u * u * u;
            const double f = x > 0.0 ? weibull_pdf(x, alpha, x0) * 4.0 * u * u * u : 0.0;
            acc += (k == 0 || k == steps) ? 0.5L * f : f;
        }
        const double mass = 1.0 - std::exp(-std::pow(50.0, alpha));
        EXPECT_NEAR(static_cast<double>(acc * h), mass, 1e-6) << "alpha=" << alpha;
    }
}

TEST(WeibullPdf, IsDerivativeOfSeCcdf) {
    for (double alpha : {0.5, 0.8, 1.0}) {
        for (double x : {0.5, 1.0, 2.0, 4.0}) {
            const double h = 1e-5;
            const double fd = -(se_ccdf(x + h, alpha, 1.3) - se_ccdf(x - h, alpha, 1.3)) / (2 * h);
            EXPECT_NEAR(weibull_pdf(x, alpha, 1.3), fd, 1e-6) << "alpha=" << alpha << " x=" << x;
        }
    }
}

TEST(FitSeMle, RecoversWeibullParameters) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::weibull_renewal;
    spec.alpha = 0.7;
    spec.x0 = 1.0;
    spec.length = 1'000'000;
    spec.seed = 1234;
    auto v = generate(spec);
    DistModel m = fit_se_mle(v);
    EXPECT_TRUE(m.converged);
    EXPECT_NEAR(m.alpha, 0.7, 0.01);
    EXPECT_NEAR(m.x0, 1.0, 0.01);
    EXPECT_EQ(m.kind, DistKind::stretched_exponential);
    EXPECT_DOUBLE_EQ(m.excluded_zero_fraction, 0.0);
}

TEST(FitSeMle, ExponentialSampleGivesAlphaOne) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::weibull_renewal;
    spec.alpha = 1.0;
    spec.x0 = 2.0;
    spec.length = 1'000'000;
    spec.seed = 4321;
    auto v = generate(spec);
    DistModel m = fit_se_mle(v);
    EXPECT_NEAR(m.alpha, 1.0, 0.01);
    EXPECT_NEAR(m.x0, 2.0, 0.02);
}

// consistency: tolerance shrinks with sample size
TEST(FitSeMle, ConsistencyAcrossSampleSizes) {
    for (auto [n, tol] : {std::pair<std::size_t, double>{10'000, 0.03},
                          std::pair<std::size_t, double>{1'000'000, 0.01}}) {
        GeneratorSpec spec;
        spec.kind = GeneratorKind::weibull_renewal;
        spec.alpha = 0.5;
        spec.x0 = 1.0;
        spec.length = n;
        spec.seed = 777;
        DistModel m = fit_se_mle(generate(spec));
        EXPECT_NEAR(m.alpha, 0.5, tol) << "n=" << n;
    }
}

TEST(FitSeMle, ZerosExcludedAndReported) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::weibull_renewal;
    spec.alpha = 0.7;
    spec.x0 = 1.0;
    spec.length = 100'000;
    spec.seed = 55;
    auto v = generate(spec);
    for (std::size_t i = 0; i < v.size(); i += 4) v[i] = 0.0; // chi = 0.25
    DistModel m = fit_se_mle(v);
    EXPECT_NEAR(m.excluded_zero_fraction, 0.25, 1e-5);
    EXPECT_NEAR(m.alpha, 0.7, 0.02); // fit unaffected by the zero mass
}

TEST(FitSeMle, DegenerateSampleThrows) {
    std::vector<double> same(500, 3.0);
    EXPECT_THROW(fit_se_mle(same), Error);
    std::vector<double> few(10, 1.0);
    EXPECT_THROW(fit_se_mle(few), Error);
}

TEST(FitPowerlawTail, RecoversParetoExponent) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::pareto;
    spec.beta = 3.0;
    spec.x_min = 1.0;
    spec.length = 1'000'000;
    spec.seed = 2718;
    auto v = generate(spec);
    DistModel m = fit_powerlaw_tail(v, 1.0);
    EXPECT_NEAR(m.beta, 3.0, 0.05);
    EXPECT_EQ(m.x_min, 1.0);
    EXPECT_GT(m.tail_count, 900'000u);
    EXPECT_LT(m.ks_distance, 0.01);
}

// deterministic tail: x_i = x_min exp(c i / n) has the closed-form estimate
// beta = n / (c (n+1) / 2n * n) = 2 n / (c (n+1))
TEST(FitPowerlawTail, ClosedFormHillValue) {
    const std::size_t n = 1000;
    const double c = 0.8, x_min = 2.0;
    std::vector<double> v;
    for (std::size_t i = 1; i <= n; ++i)
        v.push_back(x_min * std::exp(c * static_cast<double>(i) / static_cast<double>(n)));
    DistModel m = fit_powerlaw_tail(v, x_min);
    const double expected = 2.0 * static_cast<double>(n) / (c * static_cast<double>(n + 1));
    EXPECT_NEAR(m.beta, expected, 1e-12 * expected);
}

TEST(FitPowerlawTail, TooFewTailSamplesThrows) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::pareto;
    spec.beta = 3.0;
    spec.x_min = 1.0;
    spec.length = 50;
    spec.seed = 1;
    auto v = generate(spec);
    EXPECT_THROW(fit_powerlaw_tail(v, 1.0), Error);
    std::vector<double> equal(500, 4.0);
    EXPECT_THROW(fit_powerlaw_tail(equal, 1.0), Error);
}

TEST(FitPowerlawTail, KsSearchLocatesThreshold) {
    // exponential body below 1, Pareto(3) tail above 1
    GeneratorSpec body;
    body.kind = GeneratorKind::weibull_renewal;
    body.alpha = 1.0;
    body.x0 = 0.3;
    body.length = 200'000;
    body.seed = 11;
    auto v = generate(body);
    for (double& x : v)
        if (x > 1.0) x = 1.0; // truncate the body at the tail start
    GeneratorSpec tailspec;
    tailspec.kind = GeneratorKind::pareto;
    tailspec.beta = 3.0;
    tailspec.x_min = 1.0;
    tailspec.length = 100'000;
    tailspec.seed = 12;
    auto tail = generate(tailspec);
    v.insert(v.end(), tail.begin(), tail.end());

    DistModel m = fit_powerlaw_tail(v);
    EXPECT_GT(m.x_min, 0.7);
    EXPECT_LT(m.x_min, 1.5);
    EXPECT_NEAR(m.beta, 3.0, 0.2);
}

TEST(ModelOverlay, ExponentialIsStraightOnSemilog) {
    DistModel m;
    m.kind = DistKind::exponential;
    m.x0 = 2.0;
    std::vector<double> grid{1.0, 5.0, 9.0};
    auto p = model_overlay(m, grid);
    const double slope1 = (std::log(p[1]) - std::log(p[0])) / (grid[1] - grid[0]);
    const double slope2 = (std::log(p[2]) - std::log(p[1])) / (grid[2] - grid[1]);
    EXPECT_NEAR(slope1, slope2, 1e-12); // collinear in (x, ln p)
}

TEST(ModelOverlay, PowerLawSlopeOnLogLog) {
    DistModel m;
    m.kind = DistKind::power_law;
    m.beta = 3.0;
    m.x_min = 1.0;
    std::vector<double> grid{2.0, 4.0, 16.0};
    auto p = model_overlay(m, grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double slope =
            (std::log(p[i]) - std::log(p[i - 1])) / (std::log(grid[i]) - std::log(grid[i - 1]));
        EXPECT_NEAR(slope, -3.0, 1e-12);
    }
}

TEST(ModelOverlay, AnchorCalibrationReproducesEmpiricalPoint) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::weibull_renewal;
    spec.alpha = 0.6;
    spec.x0 = 1.0;
    spec.length = 50'000;
    spec.seed = 6;
    auto v = generate(spec);
    EcdfCurve curve = ecdf_complementary(v);
    auto [ax, ap] = anchor_from_ecdf(curve, 0.5);

    DistModel guide;
    guide.kind = DistKind::stretched_exponential;
    guide.alpha = 0.6;
    guide.x0 = 0.0; // calibrate from the anchor
    std::vector<double> grid{ax};
    auto p = model_overlay(guide, grid, std::make_pair(ax, ap));
    EXPECT_NEAR(p[0], ap, 1e-9);

    DistModel pl;
    pl.kind = DistKind::power_law;
    pl.beta = 3.0;
    auto p2 = model_overlay(pl, grid, std::make_pair(ax, ap));
    EXPECT_NEAR(p2[0], ap, 1e-9);

    EXPECT_THROW(model_overlay(guide, std::vector<double>{}), Error);
    EXPECT_THROW(model_overlay(guide, grid), Error); // no scale, no anchor
}
