#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <beliefplan/error.hpp>
#include <beliefplan/gaussian.hpp>

#include "oracles.hpp"

using namespace beliefplan;

TEST(StdNormalCdf, CenterIsHalf) { EXPECT_DOUBLE_EQ(std_normal_cdf(0.0), 0.5); }

TEST(StdNormalCdf, MatchesSeriesOracle) {
  EXPECT_NEAR(std_normal_cdf(1.6448536270), 0.95, 1e-9);
  for (double v = -6.0; v <= 6.0; v += 0.125) {
    EXPECT_NEAR(std_normal_cdf(v), static_cast<double>(testing_oracles::normal_cdf(v)), 1e-14) << v;
  }
}

TEST(StdNormalCdf, FarTailStaysNonnegative) {
  const double v = std_normal_cdf(-38.0);
  EXPECT_GE(v, 0.0);
  EXPECT_LE(v, 1e-300);
}

TEST(StdNormalCdf, Symmetric) {
  for (double v = 0.0; v < 9.0; v += 0.37) {
    EXPECT_NEAR(std_normal_cdf(-v), 1.0 - std_normal_cdf(v), 1e-12);
  }
}

TEST(StdNormalCdf, RejectsNonFinite) {
  EXPECT_THROW(std_normal_cdf(std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(std_normal_cdf(std::numeric_limits<double>::infinity()), DomainError);
}

TEST(StdNormalQuantile, KnownPoints) {
  EXPECT_DOUBLE_EQ(std_normal_quantile(0.5), 0.0);
  const double q99 = static_cast<double>(testing_oracles::normal_quantile(0.99L));
  const double q95 = static_cast<double>(testing_oracles::normal_quantile(0.95L));
  EXPECT_NEAR(q99, 2.3263478740, 1e-8);
  EXPECT_NEAR(q95, 1.6448536270, 1e-8);
  EXPECT_NEAR(std_normal_quantile(0.99), q99, 1e-9);
  EXPECT_NEAR(std_normal_quantile(0.95), q95, 1e-9);
}

TEST(StdNormalQuantile, RoundTripAndMonotone) {
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1000; ++i) {
    const double p = 1e-6 + (1.0 - 2e-6) * i / 1000.0;
    const double q = std_normal_quantile(p);
    EXPECT_LE(std::fabs(std_normal_cdf(q) - p), 1e-9) << p;
    EXPECT_GT(q, prev);
    prev = q;
  }
}

TEST(StdNormalQuantile, RejectsBoundaries) {
  EXPECT_THROW(std_normal_quantile(0.0), DomainError);
  EXPECT_THROW(std_normal_quantile(1.0), DomainError);
  EXPECT_THROW(std_normal_quantile(-0.2), DomainError);
}

TEST(MakeBelief, AcceptsLightDarkPrior) {
  const auto b = make_belief(Vector{{0.0, 2.5}}, Matrix{{0.1, 0.0}, {0.0, 0.1}});
  EXPECT_EQ(b.dim(), 2);
  EXPECT_DOUBLE_EQ(uncertainty_measure(b), 0.2);
}

TEST(MakeBelief, RejectsNegativeDefinite) {
  EXPECT_THROW(make_belief(Vector{{0.0}}, Matrix{{-1.0}}), InvalidCovariance);
}

TEST(MakeBelief, AcceptsZeroCovariance) {
  const auto b = make_belief(Vector{{1.0, 1.0}}, Matrix::Zero(2, 2));
  EXPECT_DOUBLE_EQ(uncertainty_measure(b), 0.0);
}

TEST(MakeBelief, SymmetrizesSmallAsymmetry) {
  const auto b = make_belief(Vector{{0.0, 0.0}}, Matrix{{1.0, 0.1 + 1e-8}, {0.1, 1.0}});
  EXPECT_DOUBLE_EQ(b.cov()(0, 1), b.cov()(1, 0));
  EXPECT_THROW(make_belief(Vector{{0.0, 0.0}}, Matrix{{1.0, 0.1 + 1e-5}, {0.1, 1.0}}),
               InvalidCovariance);
}

TEST(MakeBelief, RejectsShapeMismatch) {
  EXPECT_THROW(make_belief(Vector{{0.0, 0.0}}, Matrix::Identity(3, 3)), DimensionError);
}

TEST(UncertaintyMeasure, Trace) {
  const auto b = make_belief(Vector{{0.0, 0.0}}, 0.0980751 * Matrix::Identity(2, 2));
  EXPECT_NEAR(uncertainty_measure(b), 0.1961502, 1e-12);
}
