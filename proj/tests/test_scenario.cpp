#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ddsync/sync.hpp"
#include "support/fixtures.hpp"

using namespace ddsync;

namespace {

constexpr double kPi = std::numbers::pi;

double max_good_edge_residual(const Scenario& s) {
  double worst = 0.0;
  for (const auto& e : s.graph.edges()) {
    if (e.label != EdgeLabel::Good) continue;
    const Rotation expected = s.ground_truth[static_cast<std::size_t>(e.j)] *
                              s.ground_truth[static_cast<std::size_t>(e.k)].transpose();
    worst = std::max(worst, (e.measurement.matrix() - expected.matrix()).norm());
  }
  return worst;
}

class ChooseFirstEdges : public Adversary {
 public:
  std::string name() const override { return "first_edges"; }
  std::vector<int> choose_bad_edges(const Scenario&, double, Rng&) override { return {0, 1}; }
  Rotation bad_measurement(const Scenario& s, const Edge&, Rng&) override { return Rotation::identity(s.graph.dim()); }
};

}  // namespace

TEST(GroundTruth, ZeroSpreadGivesEqualRotations) {
  Rng rng(3);
  for (int dim : {2, 3}) {
    const auto truth = generate_ground_truth(6, dim, 0.0, rng);
    for (const auto& r : truth) EXPECT_LT((r.matrix() - truth[0].matrix()).norm(), 1e-15);
  }
}

TEST(GroundTruth, SpreadBoundsPairwiseDistanceAndInitialDelta) {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 2 + trial % 2;
    const double rho = 0.1 + 0.03 * trial;
    const auto truth = generate_ground_truth(15, dim, rho, rng);
    std::vector<Rotation> transposed;
    for (const auto& r : truth) transposed.push_back(r.transpose());
    double worst = 0.0;
    for (const auto& a : transposed)
      for (const auto& b : transposed) {
        const double d = dim == 2 ? angular_distance(UnitComplex::from_rotation(a), UnitComplex::from_rotation(b))
                                  : geodesic_distance(a, b);
        worst = std::max(worst, d);
      }
    EXPECT_LE(worst, 2 * rho + 1e-12);
    const std::vector<Rotation> init(15, Rotation::identity(dim));
    EXPECT_LE(normalization_spread(init, truth), 2 * rho + 1e-12);
  }
  EXPECT_THROW(generate_ground_truth(3, 2, kPi / 2, rng), SyncError);
}

TEST(MakeScenario, GoodEdgesSatisfyMeasurementEquation) {
  Rng rng(5);
  for (int dim : {2, 3, 4}) {
    const Scenario s = make_scenario(make_complete(7, dim), generate_ground_truth(7, dim, 1.0, rng), {});
    EXPECT_LT(max_good_edge_residual(s), 1e-12);
    EXPECT_TRUE(s.graph.is_labeled());
    EXPECT_EQ(corruption_stats(s.graph).alpha0, 0.0);
  }
}

TEST(CorruptRandom, ZeroAlphaLeavesScenarioUnchanged) {
  Rng rng(6);
  const Scenario s = fixture::random_complete(8, 2, 0.5, 0.0, rng);
  const Scenario t = corrupt_random(s, 0.0, rng);
  for (std::size_t i = 0; i < s.graph.edges().size(); ++i) {
    EXPECT_EQ(s.graph.edges()[i].measurement.matrix(), t.graph.edges()[i].measurement.matrix());
    EXPECT_EQ(t.graph.edges()[i].label, EdgeLabel::Good);
  }
}

TEST(CorruptRandom, RespectsPerNodeCapAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const double alpha = 0.05 + 0.004 * static_cast<double>(seed);
    const Scenario s = fixture::random_complete(20, 2, 1.0, alpha, rng);
    const auto stats = corruption_stats(s.graph);
    EXPECT_LE(stats.alpha0, alpha);
    const int cap = static_cast<int>(std::floor(alpha * 19));
    bool saturated = false;
    for (const auto& pn : stats.per_node) saturated = saturated || pn.bad == cap;
    EXPECT_TRUE(saturated) << seed;
    EXPECT_LT(max_good_edge_residual(s), 1e-12);
  }
}

TEST(CorruptRandom, RejectsOutOfRangeAlpha) {
  Rng rng(7);
  const Scenario s = fixture::random_complete(8, 2, 0.5, 0.0, rng);
  EXPECT_THROW(corrupt_random(s, 0.5, rng), SyncError);
  EXPECT_THROW(corrupt_random(s, -0.1, rng), SyncError);
}

TEST(CorruptRandom, SmallCapsProduceNoCorruption) {
  Rng rng(8);
  const Scenario s = fixture::random_complete(5, 2, 0.5, 0.2, rng);
  EXPECT_EQ(corruption_stats(s.graph).alpha0, 0.0);
}

TEST(CorruptRandom, DeterministicGivenSeed) {
  auto build = [] {
    Rng rng(42);
    return fixture::random_complete(12, 3, 0.8, 0.2, rng);
  };
  const Scenario a = build(), b = build();
  for (std::size_t i = 0; i < a.graph.edges().size(); ++i) {
    EXPECT_EQ(a.graph.edges()[i].measurement.matrix(), b.graph.edges()[i].measurement.matrix());
    EXPECT_EQ(a.graph.edges()[i].label, b.graph.edges()[i].label);
  }
}

TEST(CorruptConsistent, BadEdgesFormCocycleOfAlternativeSignal) {
  Rng rng(9);
  Scenario s = make_scenario(make_complete(16, 3), generate_ground_truth(16, 3, 1.0, rng), {});
  std::vector<Rotation> signal;
  s = corrupt_consistent(s, 0.6, rng, CorruptionOptions{true}, &signal);
  ASSERT_EQ(signal.size(), 16u);
  EXPECT_LE(corruption_stats(s.graph).alpha0, 0.6);
  int cycles = 0;
  const auto& g = s.graph;
  auto bad = [&](int a, int b) {
    const auto idx = g.edge_index(a, b);
    return idx && g.edges()[static_cast<std::size_t>(*idx)].label == EdgeLabel::Bad;
  };
  for (int a = 0; a < 16; ++a)
    for (int b = a + 1; b < 16; ++b)
      for (int c = b + 1; c < 16; ++c) {
        if (!(bad(a, b) && bad(b, c) && bad(a, c))) continue;
        ++cycles;
        const Rotation loop = g.measurement(a, b) * g.measurement(b, c) * g.measurement(c, a);
        EXPECT_LT((loop.matrix() - Eigen::Matrix3d::Identity()).norm(), 1e-12);
      }
  EXPECT_GT(cycles, 0);
  EXPECT_LT(max_good_edge_residual(s), 1e-12);
}

TEST(CorruptConsistent, MajorityNeedsExplicitOptIn) {
  Rng rng(10);
  const Scenario s = fixture::random_complete(8, 2, 0.5, 0.0, rng);
  EXPECT_THROW(corrupt_consistent(s, 0.6, rng), SyncError);
  EXPECT_EQ(corrupt_consistent(s, 0.0, rng).meta.model, "consistent");
}

TEST(Adversary, PluginChoosesEdgesAndValues) {
  Rng rng(11);
  const Scenario s = make_scenario(make_complete(5, 2), generate_ground_truth(5, 2, 1.0, rng), {});
  ChooseFirstEdges adversary;
  const Scenario t = corrupt(s, adversary, 0.3, rng);
  EXPECT_EQ(t.meta.model, "first_edges");
  EXPECT_EQ(t.graph.edges()[0].label, EdgeLabel::Bad);
  EXPECT_EQ(t.graph.edges()[1].label, EdgeLabel::Bad);
  EXPECT_EQ(t.graph.edges()[2].label, EdgeLabel::Good);
  EXPECT_EQ(t.graph.edges()[0].measurement.matrix(), Eigen::Matrix2d::Identity());
}

TEST(SpuriousFixture, CorruptionFractionAndInitialSpread) {
  for (int n : {6, 8, 10}) {
    const Scenario s = spurious_fixture(n, kPi / 4);
    EXPECT_EQ(corruption_stats(s.graph).alpha0, 1.0 / (n - 1)) << n;
    EXPECT_NEAR(normalization_spread(s.init, s.ground_truth), kPi / 4, 1e-12);
    EXPECT_LT(max_good_edge_residual(s), 1e-12);
    for (const auto& e : s.graph.edges()) EXPECT_EQ(e.label == EdgeLabel::Bad, e.k == e.j + n / 2);
  }
}

TEST(SpuriousFixture, BadEstimatesSitEpsilonOutsideEachCluster) {
  const int n = 6;
  const double theta = kPi / 4;
  const Scenario s = spurious_fixture(n, theta);
  for (int j = 0; j < n / 2; ++j) {
    const int k = j + n / 2;
    const double at_j = (s.graph.measurement(j, k) * s.init[static_cast<std::size_t>(k)]).angle();
    const double at_k = (s.graph.measurement(k, j) * s.init[static_cast<std::size_t>(j)]).angle();
    EXPECT_NEAR(wrap_angle(at_j - s.init[static_cast<std::size_t>(j)].angle()), kSpuriousEpsilon, 1e-12);
    EXPECT_NEAR(wrap_angle(at_k - s.init[static_cast<std::size_t>(k)].angle()), -kSpuriousEpsilon, 1e-12);
  }
}

TEST(SpuriousFixture, RejectsInvalidParameters) {
  EXPECT_THROW(spurious_fixture(5, 0.5), SyncError);
  EXPECT_THROW(spurious_fixture(6, 0.0), SyncError);
  EXPECT_THROW(spurious_fixture(6, kPi / 2), SyncError);
}
