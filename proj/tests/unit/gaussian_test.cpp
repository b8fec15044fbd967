#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "arbohub/scoring/gaussian.hpp"
#include "arbohub/scoring/point_metrics.hpp"
#include "oracles.hpp"

namespace arbohub::scoring {
namespace {

// Frozen from crps_by_integration (and cross-checked against an independent
// quadrature): CRPS(N(0,1), 0) and CRPS(N(0,1), 1).
constexpr double kCrpsAtMean = 0.2336949772551;
constexpr double kCrpsOneSigma = 0.6024413576276;

TEST(OracleTest, QuadratureReproducesFrozenValues) {
    EXPECT_NEAR(testing::crps_by_integration(0, 1, 0), kCrpsAtMean, 1e-10);
    EXPECT_NEAR(testing::crps_by_integration(0, 1, 1), kCrpsOneSigma, 1e-10);
}

TEST(SigmaFromIntervalTest, QuarterOfWidth) {
    EXPECT_EQ(sigma_from_interval(2, 10), 2.0);
    EXPECT_EQ(sigma_from_interval(0, 4), 1.0);
    try {
        sigma_from_interval(5, 5);
        FAIL();
    } catch (const ScoringError& e) {
        EXPECT_EQ(e.code(), ScoringErrc::degenerate_interval);
    }
    EXPECT_THROW(sigma_from_interval(6, 5), ScoringError);
    try {
        sigma_from_interval(NAN, 5);
        FAIL();
    } catch (const ScoringError& e) {
        EXPECT_EQ(e.code(), ScoringErrc::invalid_number);
    }
}

TEST(CrpsNormalTest, SpotValues) {
    EXPECT_NEAR(crps_normal(0, 1, 0), 0.2336949, 1e-6);
    EXPECT_NEAR(crps_normal(0, 1, 1), 0.6024413, 1e-6);
    EXPECT_NEAR(crps_normal(5, 1, 5), 0.2336949, 1e-6);
    EXPECT_NEAR(crps_normal(0, 1, 0), kCrpsAtMean, 1e-12);
    EXPECT_NEAR(crps_normal(0, 1, 1), kCrpsOneSigma, 1e-12);
}

TEST(CrpsNormalTest, RejectsBadScale) {
    for (double sigma : {0.0, -1.0, double{INFINITY}, double{NAN}}) {
        try {
            crps_normal(0, sigma, 0);
            FAIL() << sigma;
        } catch (const ScoringError& e) {
            EXPECT_EQ(e.code(), ScoringErrc::invalid_scale);
        }
    }
    EXPECT_THROW(log_score_normal(0, 0, 0), ScoringError);
}

TEST(CrpsNormalTest, MatchesQuadratureOnCoarseGrid) {
    for (double mu : {-3.0, 0.0, 2.5}) {
        for (double sigma : {0.1, 1.0, 10.0}) {
            for (double y : {-9.0, -0.5, 0.0, 4.0}) {
                EXPECT_NEAR(crps_normal(mu, sigma, y), testing::crps_by_integration(mu, sigma, y),
                            1e-6)
                    << mu << " " << sigma << " " << y;
            }
        }
    }
}

TEST(CrpsNormalProperty, NonnegativeAndEquivariant) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> loc(-100, 100), scale_log(-3, 3), shift(-100, 100),
        factor(0.1, 10);
    for (int i = 0; i < 2000; ++i) {
        const double mu = loc(rng), y = loc(rng), sigma = std::exp(scale_log(rng));
        const double base = crps_normal(mu, sigma, y);
        ASSERT_GE(base, 0.0);
        const double c = shift(rng);
        ASSERT_NEAR(crps_normal(mu + c, sigma, y + c), base, 1e-12 * std::max(1.0, base));
        const double k = factor(rng);
        ASSERT_NEAR(crps_normal(k * mu, k * sigma, k * y), k * base,
                    1e-12 * std::max(1.0, k * base));
    }
}

TEST(CrpsNormalProperty, PointForecastLimit) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> gap_log(std::log(0.1), std::log(100.0)), loc(-50, 50);
    for (int i = 0; i < 1000; ++i) {
        const double mu = loc(rng);
        const double gap = std::exp(gap_log(rng)) * (i % 2 ? 1 : -1);
        ASSERT_LT(std::abs(crps_normal(mu, 1e-9, mu + gap) - std::abs(gap)), 1e-6);
    }
}

TEST(LogScoreNormalTest, SpotValues) {
    const double half_log_2pi = 0.5 * std::log(2 * std::numbers::pi);
    EXPECT_NEAR(log_score_normal(0, 1, 0), -half_log_2pi, 1e-12);
    EXPECT_NEAR(log_score_normal(0, 1, 0), -0.9189385, 5e-8);
    EXPECT_NEAR(log_score_normal(0, 1, 1), -1.4189385, 5e-8);
    EXPECT_NEAR(log_score_normal(0, 2, 0), -1.6120857, 5e-8);
    EXPECT_NEAR(log_score_normal(0, 2, 0), -half_log_2pi - std::log(2.0), 1e-12);
}

TEST(LogScoreNormalProperty, MaximizedAtMedian) {
    for (double mu : {-10.0, 0.0, 3.5}) {
        for (double sigma : {0.5, 1.0, 20.0}) {
            const double peak = log_score_normal(mu, sigma, mu);
            EXPECT_NEAR(peak, -std::log(sigma * std::sqrt(2 * std::numbers::pi)), 1e-12);
            for (int k = -50; k <= 50; ++k) {
                if (k == 0) continue;
                EXPECT_LT(log_score_normal(mu, sigma, mu + 0.1 * k * sigma), peak);
            }
        }
    }
}

TEST(PointMetricsTest, Examples) {
    const std::vector<double> a{1, 2, 3};
    EXPECT_EQ(mae(a, a), 0.0);
    EXPECT_EQ(mse(a, a), 0.0);
    const std::vector<double> zeros{0, 0}, obs{1, 3};
    EXPECT_EQ(mae(zeros, obs), 2.0);
    EXPECT_EQ(mse(zeros, obs), 5.0);
    const std::vector<double> empty;
    try {
        mae(empty, empty);
        FAIL();
    } catch (const ScoringError& e) {
        EXPECT_EQ(e.code(), ScoringErrc::empty_input);
    }
    EXPECT_THROW(mse(a, obs), ScoringError);
}

TEST(PointMetricsProperty, ZeroExactlyWhenEqual) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> v(-10, 10);
    for (int i = 0; i < 500; ++i) {
        std::vector<double> p(5), o(5);
        for (auto& x : p) x = v(rng);
        o = p;
        if (i % 2) o[static_cast<std::size_t>(i) % 5] += 0.5;
        const bool equal = p == o;
        ASSERT_GE(mae(p, o), 0.0);
        ASSERT_GE(mse(p, o), 0.0);
        ASSERT_EQ(mae(p, o) == 0.0, equal);
        ASSERT_EQ(mse(p, o) == 0.0, equal);
    }
}

}  // namespace
}  // namespace arbohub::scoring
