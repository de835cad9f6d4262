// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mosur/error.hpp"
#include "mosur/stats.hpp"
#include "test_support.hpp"

namespace mosur {
namespace {

TEST(StdNormal, ValuesAtZero) {
  const auto v = std_normal(0.0);
  EXPECT_NEAR(v.pdf, 0.3989422804014327, 1e-15);
  EXPECT_DOUBLE_EQ(v.cdf, 0.5);
}

TEST(StdNormal, UpperTail) { EXPECT_NEAR(std_normal(8.0).cdf, 1.0, 1e-15); }

TEST(StdNormal, QuantileMatchesQuadrature) {
  const double u = 1.959963985;
  EXPECT_NEAR(testing::normal_cdf_by_quadrature(u), 0.975, 1e-9);
  EXPECT_NEAR(std_normal(u).cdf, 0.975, 1e-9);
}

TEST(StdNormal, SymmetryAndMonotonicity) {
  double prev = 0.0;
  for (double u = -8.0; u <= 8.0; u += 0.25) {
    const double c = std_normal(u).cdf;
    EXPECT_NEAR(std_normal(-u).cdf, 1.0 - c, 1e-15);
    if (u > -8.0) EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(StdNormal, RejectsNonFinite) {
  EXPECT_THROW(std_normal(std::nan("")), Error);
  EXPECT_THROW(std_normal(kInf), Error);
}

TEST(CorrelationType, SnapsAndRejects) {
  EXPECT_EQ(Correlation(1.0 - 1e-13).value(), 1.0);
  EXPECT_EQ(Correlation(-1.0 - 1e-13).value(), -1.0);
  EXPECT_THROW(Correlation(1.01), Error);
  EXPECT_EQ(Correlation::clamped(1.3).value(), 1.0);
}

TEST(BvnCdf, SheppardIdentity) {
  EXPECT_NEAR(bvn_cdf(0, 0, Correlation(0.5)), 1.0 / 3.0, 1e-10);
  for (double r = -0.99; r <= 0.99; r += 0.03) {
    EXPECT_NEAR(bvn_cdf(0, 0, Correlation(r)),
                0.25 + std::asin(r) / (2 * M_PI), 1e-14)
        << "rho=" << r;
  }
}

TEST(BvnCdf, InfiniteLimitsMarginalize) {
  for (double r : {-0.9, -0.2, 0.0, 0.6, 1.0}) {
    EXPECT_DOUBLE_EQ(bvn_cdf(kInf, -0.4, Correlation(r)), norm_cdf(-0.4));
    EXPECT_DOUBLE_EQ(bvn_cdf(1.1, kInf, Correlation(r)), norm_cdf(1.1));
    EXPECT_EQ(bvn_cdf(-kInf, 2.0, Correlation(r)), 0.0);
    EXPECT_EQ(bvn_cdf(kInf, kInf, Correlation(r)), 1.0);
  }
}

TEST(BvnCdf, AgreesWithQuadratureAtExamplePoint) {
  const double expected = testing::bvn_by_quadrature(0.3, -0.7, 0.6);
  EXPECT_NEAR(bvn_cdf(0.3, -0.7, Correlation(0.6)), expected, 1e-10);
}

TEST(BvnCdf, AgreesWithQuadratureOnRandomPoints) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lim(-6, 6), cor(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const double h = lim(rng), k = lim(rng), r = cor(rng);
    EXPECT_NEAR(bvn_cdf(h, k, Correlation(r)),
                testing::bvn_by_quadrature(h, k, r), 1e-10)
        << h << " " << k << " " << r;
  }
}

TEST(BvnCdf, Invariants) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lim(-5, 5), cor(-1, 1);
  for (int i = 0; i < 2000; ++i) {
    const double h = lim(rng), k = lim(rng), r = cor(rng);
    const double p = bvn_cdf(h, k, Correlation(r));
    EXPECT_NEAR(bvn_cdf(h, k, Correlation(0.0)), norm_cdf(h) * norm_cdf(k),
                1e-12);
    EXPECT_DOUBLE_EQ(p, bvn_cdf(k, h, Correlation(r)));
    EXPECT_NEAR(bvn_cdf(h, k, Correlation(1.0)), norm_cdf(std::min(h, k)),
                1e-12);
    EXPECT_NEAR(bvn_cdf(h, k, Correlation(-1.0)),
                std::max(0.0, norm_cdf(h) + norm_cdf(k) - 1.0), 1e-12);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, std::min(norm_cdf(h), norm_cdf(k)));
  }
}

TEST(BvnCdf, MonotoneInBothLimits) {
  for (double r : {-0.95, -0.5, 0.1, 0.8, 0.97}) {
    double prev_h = 0.0, prev_k = 0.0;
    for (double t = -6; t <= 6; t += 0.05) {
      const double ph = bvn_cdf(t, 0.4, Correlation(r));
      const double pk = bvn_cdf(-0.3, t, Correlation(r));
      EXPECT_GE(ph, prev_h - 1e-15);
      EXPECT_GE(pk, prev_k - 1e-15);
      prev_h = ph;
      prev_k = pk;
    }
  }
}

TEST(BvnCdf, NearUnitCorrelationIsContinuous) {
  const double at_one = bvn_cdf(0.2, 0.5, Correlation(1.0));
  EXPECT_NEAR(bvn_cdf(0.2, 0.5, Correlation(1.0 - 1e-9)), at_one, 1e-6);
  const double at_minus = bvn_cdf(0.2, 0.5, Correlation(-1.0));
  EXPECT_NEAR(bvn_cdf(0.2, 0.5, Correlation(-1.0 + 1e-9)), at_minus, 1e-6);
}

TEST(BvnCdf, ExtremeLimitsStayFinite) {
  for (double r : {-0.999, -0.95, -0.5, 0.0, 0.5, 0.95, 0.999}) {
    for (double h : {-1e4, -1244.6, -45.0, -3.0, 0.0, 2.0, 257.5, 1e4}) {
      for (double k : {-1e4, -398.0, -1.0, 0.5, 45.0, 1e4}) {
        const double p = bvn_cdf(h, k, Correlation(r));
        ASSERT_TRUE(std::isfinite(p)) << h << " " << k << " " << r;
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, std::min(norm_cdf(h), norm_cdf(k)));
      }
    }
  }
  EXPECT_EQ(bvn_cdf(-1244.6, 0.3, Correlation(-0.95)), 0.0);
  EXPECT_EQ(bvn_cdf(257.5, 0.3, Correlation(-0.95)), norm_cdf(0.3));
}

}  // namespace
}  // namespace mosur
