#pragma once

#include <optional>

#include "ddsync/sync.hpp"

namespace ddsync {

inline constexpr double kTasTrim = 0.25;

/// min(0.9, 0.9 (n-1)/(n+1)).
double default_tas_eta(int n);

struct TasConfig {
  std::optional<double> eta;
  RunControls controls;
};

/// Validates eta in (0, 1), and eta < (n-1)/(n+1) on complete graphs.
double resolve_tas_eta(const TasConfig& config, const MeasurementGraph& graph);

/// z_j <- z_j exp(i eta * trimmed_mean_0.25{arg(conj(z_j) z_jk z_k)}). Cut-locus
/// terms are skipped. Returns eta * |mean| in radians.
double tas_update_node(SyncState& state, const MeasurementGraph& graph, double eta, int j, int* skipped = nullptr);

RunTrace tas_run(const Scenario& scenario, const TasConfig& config, SyncState* final_state = nullptr);

}  // namespace ddsync
