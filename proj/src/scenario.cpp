#include "ddsync/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ddsync {

std::vector<Rotation> generate_ground_truth(int n, int dim, double spread_rho, Rng& rng) {
  if (n < 1) throw SyncError(ErrorKind::InvalidArgument, "n must be positive");
  if (!(spread_rho >= 0.0 && spread_rho < std::numbers::pi / 2)) {
    throw SyncError(ErrorKind::InvalidArgument, "spread rho must lie in [0, pi/2)");
  }
  const Rotation center = random_rotation(dim, rng);
  const int m = tangent_dim(dim);
  // Coordinates carry the Frobenius scaling; the angular metric on SO(2) is 1/sqrt(2) of it.
  const double scale = dim == 2 ? kSqrt2 : 1.0;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Rotation> truth;
  truth.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd dir(m);
    do {
      for (int i = 0; i < m; ++i) dir(i) = gauss(rng);
    } while (dir.norm() < 1e-12);
    dir *= scale * spread_rho * unit(rng) / dir.norm();
    truth.push_back(exp_coords(center, dir).transpose());
  }
  return truth;
}

Scenario make_scenario(const MeasurementGraph& topology, std::vector<Rotation> ground_truth, ScenarioMeta meta) {
  if (static_cast<int>(ground_truth.size()) != topology.n()) {
    throw SyncError(ErrorKind::DimensionMismatch, "ground truth size differs from node count");
  }
  std::vector<Edge> edges = topology.edges();
  for (auto& e : edges) {
    if (ground_truth[static_cast<std::size_t>(e.j)].dim() != topology.dim()) {
      throw SyncError(ErrorKind::DimensionMismatch, "ground truth dimension differs from graph dimension");
    }
    e.measurement = ground_truth[static_cast<std::size_t>(e.j)] * ground_truth[static_cast<std::size_t>(e.k)].transpose();
    e.label = EdgeLabel::Good;
  }
  std::vector<Rotation> init(static_cast<std::size_t>(topology.n()), Rotation::identity(topology.dim()));
  return Scenario{topology.with_edges(std::move(edges)), std::move(ground_truth), std::move(init), std::move(meta)};
}

std::vector<int> Adversary::choose_bad_edges(const Scenario& s, double alpha, Rng& rng) {
  const auto& g = s.graph;
  std::vector<int> cap(static_cast<std::size_t>(g.n()));
  for (int j = 0; j < g.n(); ++j) cap[static_cast<std::size_t>(j)] = static_cast<int>(std::floor(alpha * g.degree(j)));
  std::vector<int> order(g.edges().size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> used(static_cast<std::size_t>(g.n()), 0);
  std::vector<int> bad;
  for (int idx : order) {
    const Edge& e = g.edges()[static_cast<std::size_t>(idx)];
    auto& uj = used[static_cast<std::size_t>(e.j)];
    auto& uk = used[static_cast<std::size_t>(e.k)];
    if (uj < cap[static_cast<std::size_t>(e.j)] && uk < cap[static_cast<std::size_t>(e.k)]) {
      ++uj;
      ++uk;
      bad.push_back(idx);
    }
  }
  // Greedy maximality implies some node with a positive cap is saturated.
  bool any_cap = false, saturated = false;
  for (int j = 0; j < g.n(); ++j) {
    any_cap = any_cap || cap[static_cast<std::size_t>(j)] > 0;
    saturated = saturated || (cap[static_cast<std::size_t>(j)] > 0 &&
                              used[static_cast<std::size_t>(j)] == cap[static_cast<std::size_t>(j)]);
  }
  if (any_cap && !saturated) {
    throw SyncError(ErrorKind::InfeasibleBudget, "greedy corruption left every per-node budget unused");
  }
  std::sort(bad.begin(), bad.end());
  return bad;
}

Rotation RandomAdversary::bad_measurement(const Scenario& s, const Edge&, Rng& rng) {
  return random_rotation(s.graph.dim(), rng);
}

std::vector<int> ConsistentAdversary::choose_bad_edges(const Scenario& s, double alpha, Rng& rng) {
  signal_.clear();
  for (int j = 0; j < s.graph.n(); ++j) signal_.push_back(random_rotation(s.graph.dim(), rng));
  return Adversary::choose_bad_edges(s, alpha, rng);
}

Rotation ConsistentAdversary::bad_measurement(const Scenario&, const Edge& e, Rng&) {
  return signal_.at(static_cast<std::size_t>(e.j)) * signal_.at(static_cast<std::size_t>(e.k)).transpose();
}

Scenario corrupt(const Scenario& s, Adversary& adversary, double alpha, Rng& rng, CorruptionOptions opts) {
  const double limit = opts.allow_majority ? 1.0 : 0.5;
  if (!(alpha >= 0.0 && alpha < limit)) {
    throw SyncError(ErrorKind::InvalidArgument,
                    opts.allow_majority ? "alpha must lie in [0, 1)" : "alpha must lie in [0, 1/2)");
  }
  Scenario out = s;
  out.meta.model = adversary.name();
  out.meta.alpha = alpha;
  if (alpha == 0.0) return out;
  std::vector<Edge> edges = s.graph.edges();
  for (int idx : adversary.choose_bad_edges(s, alpha, rng)) {
    Edge& e = edges[static_cast<std::size_t>(idx)];
    e.measurement = adversary.bad_measurement(s, e, rng);
    e.label = EdgeLabel::Bad;
  }
  out.graph = s.graph.with_edges(std::move(edges));
  return out;
}

Scenario corrupt_random(const Scenario& s, double alpha, Rng& rng, CorruptionOptions opts) {
  RandomAdversary adversary;
  return corrupt(s, adversary, alpha, rng, opts);
}

Scenario corrupt_consistent(const Scenario& s, double alpha, Rng& rng, CorruptionOptions opts,
                            std::vector<Rotation>* signal) {
  ConsistentAdversary adversary;
  Scenario out = corrupt(s, adversary, alpha, rng, opts);
  if (signal) *signal = adversary.signal();
  return out;
}

Scenario spurious_fixture(int n_even, double theta) {
  if (n_even < 2 || n_even % 2 != 0) throw SyncError(ErrorKind::InvalidArgument, "fixture needs an even n >= 2");
  if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
    throw SyncError(ErrorKind::InvalidArgument, "fixture needs 0 < theta < pi/2");
  }
  const int half = n_even / 2;
  std::vector<Rotation> truth;
  for (int j = 0; j < n_even; ++j) truth.push_back(Rotation::from_angle(wrap_angle(0.7 * j)));
  Scenario s = make_scenario(make_complete(n_even, 2), truth, ScenarioMeta{"spurious", 0.0, 0, 0.0});
  s.meta.alpha = 1.0 / (n_even - 1);

  // z_j = z*_j e^{i theta} on the first half, z*_j on the second.
  for (int j = 0; j < half; ++j) s.init[static_cast<std::size_t>(j)] = Rotation::from_angle(truth[static_cast<std::size_t>(j)].angle() + theta);
  for (int j = half; j < n_even; ++j) s.init[static_cast<std::size_t>(j)] = truth[static_cast<std::size_t>(j)];

  // Bad edge (j, j + n/2): z_jk z_k lands epsilon past z_j (away from the
  // other cluster) and the reverse estimate lands epsilon past z_k.
  std::vector<Edge> edges = s.graph.edges();
  for (auto& e : edges) {
    if (e.k != e.j + half) continue;
    const double zj = truth[static_cast<std::size_t>(e.j)].angle();
    const double zk = truth[static_cast<std::size_t>(e.k)].angle();
    e.measurement = Rotation::from_angle(wrap_angle(zj - zk + theta + kSpuriousEpsilon));
    e.label = EdgeLabel::Bad;
  }
  s.graph = s.graph.with_edges(std::move(edges));
  return s;
}

}  // namespace ddsync
