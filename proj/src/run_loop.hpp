#pragma once

// Cyclic coordinate loop shared by the solvers.

#include <chrono>
#include <numeric>

#include "ddsync/l1mra.hpp"
#include "ddsync/sync.hpp"

namespace ddsync::detail {

inline EpochRecord epoch_record(const Scenario& s, const SyncState& state, const RunControls& c, int epoch,
                                double max_step, std::chrono::steady_clock::time_point start) {
  EpochRecord rec;
  rec.epoch = epoch;
  rec.t = state.t;
  rec.max_step = max_step;
  if (s.has_ground_truth()) {
    rec.delta = normalization_spread(state.estimates, s.ground_truth);
    if (c.track_ball) rec.ball_radius = normalization_ball_radius(state.estimates, s.ground_truth);
  }
  if (s.graph.dim() == 2) rec.l1_energy = l1_energy(state.estimates, s.graph);
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

/// `update(state, j)` changes estimate j and returns its step norm.
/// `order(epoch, nodes)` may permute the visiting order of an epoch.
/// `done(max_step)` decides convergence after a full epoch.
template <class Update, class Order, class Done>
RunTrace run_cyclic(const Scenario& s, SyncState& state, const RunControls& c, Update&& update, Order&& order,
                    Done&& done, bool energy_per_iteration = false) {
  if (c.max_epochs < 0) throw SyncError(ErrorKind::InvalidArgument, "max_epochs must be non-negative");
  const auto start = std::chrono::steady_clock::now();
  RunTrace trace;
  trace.epochs.push_back(epoch_record(s, state, c, 0, 0.0, start));
  std::vector<int> nodes(static_cast<std::size_t>(s.graph.n()));
  for (int epoch = 1; epoch <= c.max_epochs; ++epoch) {
    std::iota(nodes.begin(), nodes.end(), 0);
    order(epoch, nodes);
    double max_step = 0.0;
    for (int j : nodes) {
      const double step = update(state, j);
      max_step = std::max(max_step, step);
      if (c.record_iterations) {
        std::optional<double> energy;
        if (energy_per_iteration) energy = l1_energy(state.estimates, s.graph);
        trace.iterations.push_back({state.t, j, step, energy});
      }
      ++state.t;
    }
    trace.epochs.push_back(epoch_record(s, state, c, epoch, max_step, start));
    if (done(max_step)) {
      trace.status = RunStatus::Converged;
      return trace;
    }
  }
  trace.status = RunStatus::MaxEpochs;
  return trace;
}

inline auto cyclic_order() {
  return [](int, std::vector<int>&) {};
}

}  // namespace ddsync::detail
