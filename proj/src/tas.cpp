#include "ddsync/tas.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ddsync/depth.hpp"
#include "run_loop.hpp"

namespace ddsync {

double default_tas_eta(int n) { return std::min(0.9, 0.9 * (n - 1) / (n + 1.0)); }

double resolve_tas_eta(const TasConfig& config, const MeasurementGraph& graph) {
  if (graph.dim() != 2) throw SyncError(ErrorKind::UnsupportedDim, "trimmed averaging runs on SO(2) only");
  const int n = graph.n();
  const double eta = config.eta.value_or(default_tas_eta(n));
  if (!(eta > 0.0 && eta < 1.0)) throw SyncError(ErrorKind::InvalidArgument, "eta must lie in (0, 1)");
  const bool complete = graph.edges().size() == static_cast<std::size_t>(n) * (n - 1) / 2;
  if (complete && n > 1 && eta >= (n - 1) / (n + 1.0)) {
    throw SyncError(ErrorKind::InvalidArgument, "eta must be below (n-1)/(n+1) on a complete graph");
  }
  return eta;
}

double tas_update_node(SyncState& state, const MeasurementGraph& graph, double eta, int j, int* skipped) {
  if (graph.dim() != 2) throw SyncError(ErrorKind::UnsupportedDim, "trimmed averaging runs on SO(2) only");
  if (graph.degree(j) < 1) throw SyncError(ErrorKind::InvalidArgument, "node has no neighbors");
  const double zj = state.estimates[static_cast<std::size_t>(j)].angle();
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(graph.degree(j)));
  for (const auto& nb : graph.adjacency(j)) {
    const double est = graph.relative(j, nb).angle() + state.estimates[static_cast<std::size_t>(nb.node)].angle();
    const double rel = wrap_angle(est - zj);
    if (std::numbers::pi - std::abs(rel) < kCutTolerance) {
      spdlog::warn("node {}: neighbor {} is on the cut locus, skipped", j, nb.node);
      if (skipped) ++*skipped;
      continue;
    }
    logs.push_back(rel);
  }
  if (logs.empty()) return 0.0;
  const double step = eta * trimmed_mean_1d(logs, kTasTrim);
  if (step != 0.0) state.estimates[static_cast<std::size_t>(j)] = Rotation::from_angle(wrap_angle(zj + step));
  return std::abs(step);
}

RunTrace tas_run(const Scenario& scenario, const TasConfig& config, SyncState* final_state) {
  const double eta = resolve_tas_eta(config, scenario.graph);
  if (static_cast<int>(scenario.init.size()) != scenario.graph.n()) {
    throw SyncError(ErrorKind::DimensionMismatch, "initialization size differs from node count");
  }
  if (scenario.graph.is_labeled()) {
    const double a0 = corruption_stats(scenario.graph).alpha0;
    if (a0 >= kTasTrim) spdlog::warn("corruption fraction {:.6g} is not below 1/4", a0);
  }
  if (scenario.has_ground_truth()) {
    const double d0 = normalization_spread(scenario.init, scenario.ground_truth);
    if (d0 >= std::numbers::pi) spdlog::warn("initial spread {:.6g} is not below pi", d0);
  }
  SyncState state{scenario.init, 0};
  int skipped = 0;
  auto update = [&](SyncState& st, int j) { return tas_update_node(st, scenario.graph, eta, j, &skipped); };
  const double tol = config.controls.stop_tol;
  RunTrace trace = detail::run_cyclic(scenario, state, config.controls, update, detail::cyclic_order(),
                                      [tol](double max_step) { return max_step < tol; });
  trace.skipped_cut_locus = skipped;
  if (final_state) *final_state = std::move(state);
  return trace;
}

}  // namespace ddsync
