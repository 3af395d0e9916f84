#include <gtest/gtest.h>

#include <cmath>

#include "ddsync/depth.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace ddsync;

namespace {

Eigen::VectorXd v3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

PointCloud tetrahedron() {
  return PointCloud(3, {v3(1, 1, 1), v3(1, -1, -1), v3(-1, 1, -1), v3(-1, -1, 1)});
}

void expect_clean(const props::Report& r) {
  EXPECT_GT(r.cases, 0);
  EXPECT_EQ(r.violations, 0) << r.first_failure;
}

}  // namespace

TEST(Depth1d, Examples) {
  const std::vector<double> xs{1, 2, 3, 4, 5};
  EXPECT_EQ(tukey_depth_1d(3, xs), 3);
  EXPECT_EQ(tukey_depth_1d(1, xs), 1);
  EXPECT_EQ(tukey_depth_1d(0, xs), 0);
}

TEST(DepthRegion1d, LevelSetAndOrderStatistics) {
  const std::vector<double> four{3, 0, 2, 1};
  auto r = depth_region_1d(0.25, four);
  EXPECT_EQ(r.lo, 0.0);
  EXPECT_EQ(r.hi, 3.0);
  auto o = order_statistic_interval_1d(0.25, four);
  EXPECT_EQ(o.lo, 0.0);
  EXPECT_EQ(o.hi, 2.0);

  const std::vector<double> eight{8, 7, 6, 5, 4, 3, 2, 1};
  o = order_statistic_interval_1d(0.25, eight);
  EXPECT_EQ(o.lo, 2.0);
  EXPECT_EQ(o.hi, 6.0);
  r = depth_region_1d(0.25, eight);
  EXPECT_EQ(r.lo, 2.0);
  EXPECT_EQ(r.hi, 7.0);

  r = depth_region_1d(1e-9, eight);
  EXPECT_EQ(r.lo, 1.0);
  EXPECT_EQ(r.hi, 8.0);
}

TEST(DepthRegion1d, RejectsBadBetaAndCrossedIndices) {
  const std::vector<double> one{1.0};
  EXPECT_THROW(depth_region_1d(0.0, one), SyncError);
  EXPECT_THROW(depth_region_1d(0.6, one), SyncError);
  try {
    order_statistic_interval_1d(0.5, one);
    FAIL();
  } catch (const SyncError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyRegion);
  }
}

TEST(DepthRegion1d, OrderStatisticIntervalInsideLevelSet) {
  Rng rng(8);
  std::normal_distribution<double> g;
  for (int n = 2; n < 30; ++n) {
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) xs.push_back(g(rng));
    for (double beta : {0.125, 0.25, 1.0 / 3}) {
      if (std::ceil(beta * n) > std::floor((1 - beta) * n)) continue;
      const auto o = order_statistic_interval_1d(beta, xs);
      const auto r = depth_region_1d(beta, xs);
      EXPECT_LE(r.lo, o.lo);
      EXPECT_GE(r.hi, o.hi);
    }
  }
}

TEST(TukeyDepth, TetrahedronCentroidIsOne) {
  const PointCloud t = tetrahedron();
  EXPECT_EQ(tukey_depth(v3(0, 0, 0), t), 1);
  Rng rng(1);
  EXPECT_EQ(oracle::depth_monte_carlo(t.points, v3(0, 0, 0), 10000, rng), 1);
}

TEST(TukeyDepth, ExtremeCloudPointHasDepthOne) {
  PointCloud c(3, {v3(0, 0, 0), v3(1, 0.2, 0.1), v3(2, -1, 0.5), v3(1.5, 1, -0.3), v3(3, 0, 0)});
  EXPECT_EQ(tukey_depth(v3(0, 0, 0), c), 1);
  PointCloud p(2, {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1), Eigen::Vector2d(2, -1)});
  EXPECT_EQ(tukey_depth(Eigen::Vector2d(0, 0), p), 1);
}

TEST(TukeyDepth, OutsideHullIsZero) {
  EXPECT_EQ(tukey_depth(v3(5, 5, 5), tetrahedron()), 0);
}

TEST(TukeyDepth, CollinearAndDuplicatePoints) {
  PointCloud line(3, {v3(-2, -2, -2), v3(-1, -1, -1), v3(1, 1, 1), v3(2, 2, 2), v3(3, 3, 3)});
  EXPECT_EQ(tukey_depth(v3(0, 0, 0), line), 2);
  EXPECT_EQ(tukey_depth(v3(1, 1, 1), line), 3);
  PointCloud same(3, std::vector<Eigen::VectorXd>(6, v3(0.5, -1, 2)));
  EXPECT_EQ(tukey_depth(v3(0.5, -1, 2), same), 6);
  EXPECT_EQ(tukey_depth(v3(0.5, -1, 2.1), same), 0);
}

TEST(TukeyDepth, PlanarMidpointOfOppositePoints) {
  PointCloud c(2, {Eigen::Vector2d(-1, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)});
  EXPECT_EQ(tukey_depth(Eigen::Vector2d(0, 0), c), 1);
  EXPECT_EQ(tukey_depth(Eigen::Vector2d(0, 0.3), c), 1);
}

TEST(TukeyDepth, RejectsHighDimension) {
  PointCloud c(4, {Eigen::VectorXd::Zero(4)});
  try {
    tukey_depth(Eigen::VectorXd::Zero(4), c);
    FAIL();
  } catch (const SyncError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedDim);
  }
  EXPECT_THROW(tukey_depth(Eigen::VectorXd::Zero(2), tetrahedron()), SyncError);
}

TEST(TukeyDepth, BoundedAboveForGeneralPosition) {
  Rng rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 10;
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < n; ++i) pts.push_back(v3(g(rng), g(rng), g(rng)));
    const PointCloud c(3, pts);
    for (int i = 0; i < n; ++i) {
      const int d = tukey_depth(pts[static_cast<std::size_t>(i)], c);
      EXPECT_GE(d, 0);
      EXPECT_LE(d, (n + 1) / 2);
    }
  }
}

TEST(TukeyDepthAbove, AgreesWithExactWhenAboveFloor) {
  Rng rng(6);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(v3(g(rng), g(rng), g(rng)));
    const PointCloud c(3, pts);
    const Eigen::VectorXd x = v3(0.3 * g(rng), 0.3 * g(rng), 0.3 * g(rng));
    const int exact = tukey_depth(x, c);
    for (int floor = 0; floor < 6; ++floor) {
      const int b = tukey_depth_above(x, c, floor);
      if (exact > floor) {
        EXPECT_EQ(b, exact);
      } else {
        EXPECT_LE(b, floor);
      }
    }
  }
}

TEST(TrimmedMean, Examples) {
  EXPECT_DOUBLE_EQ(trimmed_mean_1d(std::vector<double>{0, 1, 2, 3}), 1.0);
  EXPECT_DOUBLE_EQ(trimmed_mean_1d(std::vector<double>(7, 2.5)), 2.5);
  for (double m : {1.0, 1e3, 1e9}) {
    EXPECT_DOUBLE_EQ(trimmed_mean_1d(std::vector<double>{-m, 0, 0, 0, 0, 0, 0, m}), 0.0);
  }
  EXPECT_DOUBLE_EQ(trimmed_mean_1d(std::vector<double>{4.0}), 4.0);
  EXPECT_THROW(trimmed_mean_1d(std::vector<double>{}), SyncError);
}

TEST(MaxDepthPoint, TrimmedMeanRuleFollowsQuantileConvention) {
  // Quantiles x_(1) = -1 and x_(3) = 0 keep {-1, 0, 0}.
  Rng rng(0);
  const auto c = PointCloud::from_scalars(std::vector<double>{-1, 0, 0, 1});
  const auto p = max_depth_point(c, 0.25, SelectionRule::default_for(1), rng);
  EXPECT_DOUBLE_EQ(p(0), -1.0 / 3.0);
  EXPECT_GE(tukey_depth(p, c), required_depth(0.25, 4));
}

TEST(MaxDepthPoint, TrimmedMeanNeedsOneDimension) {
  Rng rng(0);
  SelectionRule rule;
  rule.variant = SelectionVariant::TrimmedMean;
  EXPECT_THROW(max_depth_point(tetrahedron(), 0.125, rule, rng), SyncError);
}

TEST(MaxDepthPoint, IdenticalPoints) {
  Rng rng(0);
  PointCloud c(3, std::vector<Eigen::VectorXd>(5, v3(1, 2, 3)));
  for (auto variant : {SelectionVariant::DeepestCandidate, SelectionVariant::RandomInterior}) {
    SelectionRule rule;
    rule.variant = variant;
    const auto p = max_depth_point(c, 0.125, rule, rng);
    EXPECT_NEAR((p - v3(1, 2, 3)).norm(), 0.0, 1e-15);
    EXPECT_EQ(tukey_depth(p, c), 5);
  }
}

TEST(MaxDepthPoint, TenPointsReachRequiredDepth) {
  Rng rng(12);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(v3(g(rng), g(rng), g(rng)));
    const PointCloud c(3, pts);
    for (auto variant : {SelectionVariant::DeepestCandidate, SelectionVariant::RandomInterior}) {
      SelectionRule rule;
      rule.variant = variant;
      EXPECT_GE(tukey_depth(max_depth_point(c, 1.0 / 8, rule, rng), c), 2);
    }
    SelectionRule rule;
    EXPECT_GE(tukey_depth(max_depth_point(c, 1.0 / 4, rule, rng), c), 3);
  }
}

TEST(MaxDepthPoint, SelectionLandsInMajorityHalfspace) {
  // More than n - n/(2d+2) points strictly inside an open halfspace through
  // the origin: the selected point must lie in that halfspace.
  Rng rng(21);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.01, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    // d = 3, beta = 1/8, n = 16: 15 points with positive first coordinate.
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 15; ++i) pts.push_back(v3(u(rng), g(rng), g(rng)));
    pts.push_back(v3(-10 * u(rng), 10 * g(rng), 10 * g(rng)));
    const PointCloud c(3, pts);
    for (auto variant : {SelectionVariant::DeepestCandidate, SelectionVariant::RandomInterior}) {
      SelectionRule rule;
      rule.variant = variant;
      EXPECT_GT(max_depth_point(c, 1.0 / 8, rule, rng)(0), 0.0);
    }
    // d = 1, beta = 1/4, n = 8: 7 positive points and an arbitrary outlier.
    std::vector<double> xs;
    for (int i = 0; i < 7; ++i) xs.push_back(u(rng));
    xs.push_back(-100 * u(rng));
    const auto c1 = PointCloud::from_scalars(xs);
    EXPECT_GT(max_depth_point(c1, 0.25, SelectionRule::default_for(1), rng)(0), 0.0);
    SelectionRule deep;
    EXPECT_GT(max_depth_point(c1, 0.25, deep, rng)(0), 0.0);
  }
}

TEST(MaxDepthPoint, RandomInteriorIsSeedDeterministic) {
  Rng a(3), b(3), gen(4);
  std::normal_distribution<double> g;
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 9; ++i) pts.push_back(v3(g(gen), g(gen), g(gen)));
  const PointCloud c(3, pts);
  SelectionRule rule;
  rule.variant = SelectionVariant::RandomInterior;
  EXPECT_EQ(max_depth_point(c, 0.125, rule, a), max_depth_point(c, 0.125, rule, b));
}

TEST(DepthProperties, DepthLowerBoundLine) { expect_clean(props::depth_lower_bound(200, 1, 1)); }
TEST(DepthProperties, DepthLowerBoundSpace) { expect_clean(props::depth_lower_bound(60, 3, 2)); }
TEST(DepthProperties, AffineEquivariance) { expect_clean(props::affine_equivariance(100, 3)); }
TEST(DepthProperties, RegionDepthConsistency) { expect_clean(props::region_depth_consistency(4)); }
TEST(DepthProperties, ExactMatchesSampling) { expect_clean(props::exact_vs_monte_carlo(40, 20000, 5)); }
