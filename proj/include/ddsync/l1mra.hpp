#pragma once

#include <vector>

#include "ddsync/sync.hpp"

namespace ddsync {

/// Offsets below this (radians) count as exact agreement.
inline constexpr double kZeroTolerance = 1e-12;

/// Neighbors of j grouped by the sign of arg(conj(z_j) z_jk z_k).
struct EstimatePartition {
  std::vector<int> c_plus;
  std::vector<int> c_minus;
  std::vector<int> c_zero;
  std::vector<int> cut;
};

/// sum over edges jk of d(z_j, z_jk z_k), angular metric.
double l1_energy(const std::vector<Rotation>& z, const MeasurementGraph& graph);

/// sum over k in E^j of d(y, z_jk z_k).
double coordinate_energy(int j, const Rotation& y, const std::vector<Rotation>& z, const MeasurementGraph& graph);

EstimatePartition partition(int j, const std::vector<Rotation>& z, const MeasurementGraph& graph);

/// One-sided derivative of the coordinate energy of j at z_j in direction
/// v = +1 (counterclockwise) or -1:
///   v (#C- - #C+) + #C0 - #cut.
double directional_derivative(int j, int v, const std::vector<Rotation>& z, const MeasurementGraph& graph);

/// Exact coordinate line search: moves z_j to the first breakpoint in the
/// steepest descent direction (ties go to +1) at which the one-sided
/// derivative is no longer negative. Leaves z_j unchanged when both one-sided
/// derivatives are >= 0. Returns the angular distance moved.
double gd_l1_update_node(int j, std::vector<Rotation>& z, const MeasurementGraph& graph);

struct FixedPointReport {
  bool fixed = true;
  std::vector<int> non_fixed;
};

FixedPointReport is_coordinatewise_fixed(const std::vector<Rotation>& z, const MeasurementGraph& graph);

/// Cyclic line searches; with stop_on_fixed the run ends after the first
/// epoch in which no coordinate moved.
RunTrace gd_l1_run(const Scenario& scenario, const RunControls& controls, bool stop_on_fixed,
                   SyncState* final_state = nullptr);

}  // namespace ddsync
