#pragma once

#include <optional>

#include "ddsync/depth.hpp"
#include "ddsync/sync.hpp"

namespace ddsync {

/// 1 / (D(D-1) + 2).
double default_beta(int dim);
/// 1 for D in {2, 3}; none above (the step must then be supplied).
std::optional<double> default_eta(int dim);

struct DdsConfig {
  std::optional<double> beta;
  std::optional<double> eta;
  std::optional<SelectionRule> rule;
  RunControls controls;
  /// Experimental: visit nodes in a fresh random order every epoch.
  bool random_order = false;
};

/// DdsConfig with defaults filled in and validated for a dimension.
struct DdsParams {
  double beta = 0.0;
  double eta = 0.0;
  SelectionRule rule;
};

DdsParams resolve(const DdsConfig& config, int dim);

/// Moves estimate j along the depth-selected direction of its tangent cloud
/// {Log_{R_j}(R_jk R_k)}. Neighbors on the cut locus are skipped (counted in
/// `skipped`). Returns eta * |v_j|.
double dds_update_node(SyncState& state, const MeasurementGraph& graph, const DdsParams& params, int j, Rng& rng,
                       int* skipped = nullptr);

/// Cyclic updates until the largest step of an epoch is below stop_tol or
/// max_epochs is reached.
RunTrace dds_run(const Scenario& scenario, const DdsConfig& config, Rng& rng, SyncState* final_state = nullptr);

}  // namespace ddsync
