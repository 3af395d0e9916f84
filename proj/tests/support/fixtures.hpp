#pragma once

// Small hand-built scenarios for solver tests.

#include <vector>

#include "ddsync/scenario.hpp"

namespace fixture {

/// SO(2) star: node 0 at angle `center`, leaves at identity, and the
/// measurement on edge 0-k chosen so that z_0k z_k has angle offsets[k-1].
inline ddsync::Scenario so2_star(const std::vector<double>& offsets, double center = 0.0) {
  using namespace ddsync;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    edges.push_back({0, static_cast<int>(i + 1), Rotation::from_angle(wrap_angle(center + offsets[i])), EdgeLabel::Unknown});
  }
  const int n = static_cast<int>(offsets.size()) + 1;
  std::vector<Rotation> init(static_cast<std::size_t>(n), Rotation::identity(2));
  init[0] = Rotation::from_angle(center);
  return Scenario{MeasurementGraph(n, 2, std::move(edges)), {}, std::move(init), {}};
}

/// Clean complete-graph scenario with random corruption.
inline ddsync::Scenario random_complete(int n, int dim, double rho, double alpha, ddsync::Rng& rng) {
  using namespace ddsync;
  Scenario s = make_scenario(make_complete(n, dim), generate_ground_truth(n, dim, rho, rng), {"clean", 0.0, 0, rho});
  return corrupt_random(s, alpha, rng);
}

}  // namespace fixture
