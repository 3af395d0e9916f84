#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ddsync/l1mra.hpp"
#include "support/fixtures.hpp"
#include "support/properties.hpp"

using namespace ddsync;

namespace {

constexpr double kPi = std::numbers::pi;

// Complete graph on six nodes, identity measurements, node 0 at angle 0.
std::vector<Rotation> angles(std::initializer_list<double> a) {
  std::vector<Rotation> z;
  for (double x : a) z.push_back(Rotation::from_angle(wrap_angle(x)));
  return z;
}

}  // namespace

TEST(L1Energy, ZeroAtTruthAndSingleEdgeOffset) {
  Rng rng(1);
  const Scenario s = fixture::random_complete(7, 2, 1.0, 0.0, rng);
  EXPECT_LT(l1_energy(s.ground_truth, s.graph), 1e-12);

  const Scenario one = fixture::so2_star({0.8});
  EXPECT_NEAR(l1_energy(one.init, one.graph), 0.8, 1e-15);
}

TEST(L1Energy, HalfOfSummedCoordinateEnergies) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Scenario s = fixture::random_complete(9, 2, 1.3, 0.3, rng);
    std::vector<Rotation> z;
    for (int j = 0; j < 9; ++j) z.push_back(random_rotation(2, rng));
    double sum = 0.0;
    for (int j = 0; j < 9; ++j) sum += coordinate_energy(j, z[static_cast<std::size_t>(j)], z, s.graph);
    EXPECT_NEAR(l1_energy(z, s.graph), 0.5 * sum, 1e-12);
  }
}

TEST(CoordinateEnergy, SumOfOffsets) {
  const Scenario s = fixture::so2_star({-0.4, 0.0, 0.4});
  EXPECT_NEAR(coordinate_energy(0, Rotation::identity(2), s.init, s.graph), 0.8, 1e-15);
  const Scenario same = fixture::so2_star({0.0, 0.0});
  EXPECT_EQ(coordinate_energy(0, Rotation::identity(2), same.init, same.graph), 0.0);
}

TEST(DirectionalDerivative, CountFormula) {
  const Scenario s = fixture::so2_star({0.3, 0.5, 1.0, -0.2});
  EXPECT_EQ(directional_derivative(0, 1, s.init, s.graph), -2.0);
  EXPECT_EQ(directional_derivative(0, -1, s.init, s.graph), 2.0);

  // Moving away from agreeing estimates costs one unit each.
  const Scenario agree = fixture::so2_star({0.0, 0.0, 0.0});
  EXPECT_EQ(directional_derivative(0, 1, agree.init, agree.graph), 3.0);
  EXPECT_EQ(directional_derivative(0, -1, agree.init, agree.graph), 3.0);

  // Antipodal estimates get closer in both directions.
  const Scenario cut = fixture::so2_star({kPi, 0.4});
  EXPECT_EQ(directional_derivative(0, 1, cut.init, cut.graph), -2.0);
  EXPECT_EQ(directional_derivative(0, -1, cut.init, cut.graph), 0.0);
  const auto p = partition(0, cut.init, cut.graph);
  EXPECT_EQ(p.cut, std::vector<int>{1});
  EXPECT_EQ(p.c_plus, std::vector<int>{2});
}

TEST(DirectionalDerivative, MatchesFiniteDifferences) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> offsets;
    for (int k = 0; k < 7; ++k) offsets.push_back(u(rng));
    const Scenario s = fixture::so2_star(offsets);
    const double f0 = coordinate_energy(0, s.init[0], s.init, s.graph);
    for (int v : {1, -1}) {
      for (double h : {1e-7, 1e-6, 1e-5, 1e-4}) {
        // Skip when a breakpoint lies within h.
        bool near = false;
        for (double o : offsets) near = near || std::abs(o) < 2 * h || kPi - std::abs(o) < 2 * h;
        if (near) continue;
        const double fh = coordinate_energy(0, Rotation::from_angle(v * h), s.init, s.graph);
        const double d = directional_derivative(0, v, s.init, s.graph);
        EXPECT_NEAR((fh - f0) / h, d, 1e-4 * std::max(1.0, std::abs(d))) << trial;
      }
    }
  }
}

TEST(GdL1Update, SingleNeighborIsReachedExactly) {
  for (double phi : {0.9, -2.0}) {
    const Scenario s = fixture::so2_star({phi});
    auto z = s.init;
    EXPECT_NEAR(gd_l1_update_node(0, z, s.graph), std::abs(phi), 1e-15);
    EXPECT_NEAR(z[0].angle(), phi, 1e-15);
  }
}

TEST(GdL1Update, StopsAtMedianBreakpoint) {
  const Scenario s = fixture::so2_star({0.1, 0.2, 0.9});
  auto z = s.init;
  gd_l1_update_node(0, z, s.graph);
  EXPECT_NEAR(z[0].angle(), 0.2, 1e-15);
  EXPECT_EQ(gd_l1_update_node(0, z, s.graph), 0.0);
}

TEST(GdL1Update, TieBreaksCounterclockwise) {
  // One estimate on each side at the same distance plus one antipode: both
  // directional derivatives equal -1.
  const Scenario s = fixture::so2_star({0.5, -0.5, kPi});
  auto z = s.init;
  ASSERT_EQ(directional_derivative(0, 1, z, s.graph), -1.0);
  ASSERT_EQ(directional_derivative(0, -1, z, s.graph), -1.0);
  gd_l1_update_node(0, z, s.graph);
  EXPECT_GT(z[0].angle(), 0.0);
}

TEST(GdL1Update, SpuriousFixtureIsFixed) {
  for (int n : {6, 8, 10}) {
    const Scenario s = spurious_fixture(n, kPi / 4);
    auto z = s.init;
    for (int j = 0; j < n; ++j) {
      EXPECT_GE(directional_derivative(j, 1, z, s.graph), 0.0);
      EXPECT_GE(directional_derivative(j, -1, z, s.graph), 0.0);
      EXPECT_EQ(gd_l1_update_node(j, z, s.graph), 0.0);
    }
    const auto rep = is_coordinatewise_fixed(s.init, s.graph);
    EXPECT_TRUE(rep.fixed);
    EXPECT_NEAR(normalization_spread(s.init, s.ground_truth), kPi / 4, 1e-12);
  }
}

TEST(FixedPoints, TruthIsFixedAndOneSidedMajorityIsNot) {
  Rng rng(4);
  const Scenario s = fixture::random_complete(8, 2, 1.0, 0.0, rng);
  EXPECT_TRUE(is_coordinatewise_fixed(s.ground_truth, s.graph).fixed);

  const Scenario star = fixture::so2_star({0.3, 0.4, 0.5, -0.1});
  const auto rep = is_coordinatewise_fixed(star.init, star.graph);
  EXPECT_FALSE(rep.fixed);
  EXPECT_EQ(rep.non_fixed.front(), 0);
}

TEST(GdL1Run, StopsOnFixedEpochAndRecordsEnergy) {
  Rng rng(5);
  const Scenario s = fixture::random_complete(10, 2, 1.0, 0.0, rng);
  const RunTrace t = gd_l1_run(s, RunControls{}, true);
  EXPECT_EQ(t.status, RunStatus::Converged);
  EXPECT_TRUE(*t.coordinatewise_fixed);
  for (const auto& it : t.iterations) EXPECT_TRUE(it.l1_energy.has_value());
  EXPECT_LT(*t.final_delta(), 1e-10);
}

TEST(GdL1Run, SpuriousFixtureNeverMoves) {
  const Scenario s = spurious_fixture(6, kPi / 4);
  RunControls c;
  c.max_epochs = 100;
  const RunTrace t = gd_l1_run(s, c, false);
  EXPECT_EQ(t.status, RunStatus::MaxEpochs);
  EXPECT_EQ(t.completed_epochs(), 100);
  EXPECT_NEAR(*t.final_delta(), kPi / 4, 1e-12);
  EXPECT_TRUE(*t.coordinatewise_fixed);
}

TEST(GdL1Run, NonClosedUpdateMap) {
  const double c = 1.0;
  const MeasurementGraph g = make_complete(6, 2);
  auto limit = angles({0.0, c, c, -c, kPi, kPi});
  gd_l1_update_node(0, limit, g);
  EXPECT_NEAR(limit[0].angle(), c, 1e-12);
  for (int l : {10, 100, 1000}) {
    auto z = angles({0.0, c, c, -c, kPi + 1.0 / l, kPi + 1.0 / l});
    gd_l1_update_node(0, z, g);
    EXPECT_NEAR(z[0].angle(), -c, 1e-12) << l;
  }
}

TEST(GdL1Run, EnergyAndSpreadMonotone) {
  const auto r = props::l1_monotonicity(15, 6);
  EXPECT_GT(r.cases, 0);
  EXPECT_EQ(r.violations, 0) << r.first_failure;
}
