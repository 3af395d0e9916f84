#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddsync/scenario.hpp"

namespace ddsync {

struct SyncState {
  std::vector<Rotation> estimates;
  long long t = 0;

  int n() const { return static_cast<int>(estimates.size()); }
  long long epoch() const { return estimates.empty() ? 0 : t / n(); }
};

enum class RunStatus { Converged, MaxEpochs, Error };
const char* to_string(RunStatus s);

struct IterationRecord {
  long long t = 0;
  int node = 0;
  double step_norm = 0.0;
  std::optional<double> l1_energy;
};

/// Epoch 0 describes the initialization; epoch e >= 1 the state after e full
/// sweeps.
struct EpochRecord {
  int epoch = 0;
  long long t = 0;
  double max_step = 0.0;
  std::optional<double> delta;
  std::optional<double> ball_radius;
  std::optional<double> l1_energy;
  double wall_ms = 0.0;
};

struct RunTrace {
  std::vector<IterationRecord> iterations;
  std::vector<EpochRecord> epochs;
  RunStatus status = RunStatus::MaxEpochs;
  std::string error;
  int skipped_cut_locus = 0;
  /// Set by the least-absolute-deviations solver.
  std::optional<bool> coordinatewise_fixed;

  std::optional<double> final_delta() const;
  int completed_epochs() const { return epochs.empty() ? 0 : epochs.back().epoch; }
  /// delta(e) / delta(e-1) for every epoch with a positive predecessor.
  std::vector<double> delta_ratios() const;
};

/// Loop controls shared by every solver.
struct RunControls {
  int max_epochs = 2000;
  double stop_tol = 1e-12;
  bool record_iterations = true;
  /// Computes the enclosing-ball radius each epoch (needs ground truth).
  bool track_ball = true;
};

/// Normalization products R*_j^T R_j.
std::vector<Rotation> normalization_products(const std::vector<Rotation>& estimates,
                                             const std::vector<Rotation>& ground_truth);

/// Maximum pairwise distance between normalization products: angular metric
/// on SO(2), Frobenius-log metric otherwise.
double normalization_spread(const std::vector<Rotation>& estimates, const std::vector<Rotation>& ground_truth);

/// Radius of the smallest enclosing ball of the normalization products in the
/// same metric as normalization_spread.
double normalization_ball_radius(const std::vector<Rotation>& estimates, const std::vector<Rotation>& ground_truth);

}  // namespace ddsync
