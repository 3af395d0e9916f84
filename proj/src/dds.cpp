#include "ddsync/dds.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <numbers>

#include "run_loop.hpp"

namespace ddsync {

double default_beta(int dim) { return 1.0 / (dim * (dim - 1) + 2); }

std::optional<double> default_eta(int dim) {
  if (dim == 2 || dim == 3) return 1.0;
  return std::nullopt;
}

DdsParams resolve(const DdsConfig& config, int dim) {
  DdsParams p;
  p.beta = config.beta.value_or(default_beta(dim));
  if (!(p.beta > 0.0 && p.beta < 0.5)) throw SyncError(ErrorKind::InvalidArgument, "beta must lie in (0, 1/2)");
  const auto eta = config.eta ? config.eta : default_eta(dim);
  if (!eta) throw SyncError(ErrorKind::InvalidArgument, "eta has no default for D > 3 and must be given");
  p.eta = *eta;
  if (!(p.eta > 0.0)) throw SyncError(ErrorKind::InvalidArgument, "eta must be positive");
  if (dim <= 3 && p.eta > 1.0) throw SyncError(ErrorKind::InvalidArgument, "eta must not exceed 1 for D <= 3");
  p.rule = config.rule.value_or(SelectionRule::default_for(tangent_dim(dim)));
  return p;
}

double dds_update_node(SyncState& state, const MeasurementGraph& graph, const DdsParams& params, int j, Rng& rng,
                       int* skipped) {
  if (graph.degree(j) < 1) throw SyncError(ErrorKind::InvalidArgument, "node has no neighbors");
  const Rotation& rj = state.estimates[static_cast<std::size_t>(j)];
  std::vector<Eigen::VectorXd> cloud;
  cloud.reserve(static_cast<std::size_t>(graph.degree(j)));
  for (const auto& nb : graph.adjacency(j)) {
    const Rotation estimate = graph.relative(j, nb) * state.estimates[static_cast<std::size_t>(nb.node)];
    try {
      cloud.push_back(log_coords(rj, estimate));
    } catch (const SyncError& e) {
      if (e.kind() != ErrorKind::CutLocus) throw;
      spdlog::warn("node {}: neighbor {} is on the cut locus, skipped", j, nb.node);
      if (skipped) ++*skipped;
    }
  }
  if (cloud.empty()) return 0.0;
  const PointCloud pc(tangent_dim(graph.dim()), std::move(cloud));
  const Eigen::VectorXd v = max_depth_point(pc, params.beta, params.rule, rng);
  const double step = params.eta * v.norm();
  if (step > 0.0) state.estimates[static_cast<std::size_t>(j)] = exp_coords(rj, params.eta * v);
  return step;
}

namespace {

void advise(const Scenario& s, double beta) {
  if (s.has_ground_truth()) {
    const double r = normalization_ball_radius(s.init, s.ground_truth);
    if (r >= std::numbers::pi / 2) spdlog::warn("initial normalization products are not within a ball of radius pi/2 ({:.6g})", r);
  }
  if (s.graph.is_labeled()) {
    const double a0 = corruption_stats(s.graph).alpha0;
    if (a0 >= beta) spdlog::warn("corruption fraction {:.6g} is not below beta {:.6g}", a0, beta);
  }
}

}  // namespace

RunTrace dds_run(const Scenario& scenario, const DdsConfig& config, Rng& rng, SyncState* final_state) {
  const DdsParams params = resolve(config, scenario.graph.dim());
  if (static_cast<int>(scenario.init.size()) != scenario.graph.n()) {
    throw SyncError(ErrorKind::DimensionMismatch, "initialization size differs from node count");
  }
  advise(scenario, params.beta);
  SyncState state{scenario.init, 0};
  int skipped = 0;
  auto update = [&](SyncState& st, int j) { return dds_update_node(st, scenario.graph, params, j, rng, &skipped); };
  auto order = [&](int, std::vector<int>& nodes) {
    if (config.random_order) std::shuffle(nodes.begin(), nodes.end(), rng);
  };
  const double tol = config.controls.stop_tol;
  RunTrace trace = detail::run_cyclic(scenario, state, config.controls, update, order,
                                      [tol](double max_step) { return max_step < tol; });
  trace.skipped_cut_locus = skipped;
  if (final_state) *final_state = std::move(state);
  return trace;
}

}  // namespace ddsync
