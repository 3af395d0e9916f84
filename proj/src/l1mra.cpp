#include "ddsync/l1mra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "run_loop.hpp"

namespace ddsync {

namespace {

constexpr double kPi = std::numbers::pi;

void require_so2(const MeasurementGraph& graph, const std::vector<Rotation>& z) {
  if (graph.dim() != 2) throw SyncError(ErrorKind::UnsupportedDim, "the L1 baseline runs on SO(2) only");
  if (static_cast<int>(z.size()) != graph.n()) {
    throw SyncError(ErrorKind::DimensionMismatch, "state size differs from node count");
  }
}

// Angles of the neighbor estimates z_jk z_k.
std::vector<std::pair<int, double>> estimates(int j, const std::vector<Rotation>& z, const MeasurementGraph& graph) {
  std::vector<std::pair<int, double>> out;
  out.reserve(static_cast<std::size_t>(graph.degree(j)));
  for (const auto& nb : graph.adjacency(j)) {
    out.emplace_back(nb.node, wrap_angle(graph.relative(j, nb).angle() + z[static_cast<std::size_t>(nb.node)].angle()));
  }
  return out;
}

struct Counts {
  int plus = 0, minus = 0, zero = 0, cut = 0;
  double derivative(int v) const { return v * (minus - plus) + zero - cut; }
};

Counts count_at(double y, const std::vector<std::pair<int, double>>& est) {
  Counts c;
  for (const auto& [k, a] : est) {
    const double rel = wrap_angle(a - y);
    if (kPi - std::abs(rel) < kCutTolerance) ++c.cut;
    else if (std::abs(rel) <= kZeroTolerance) ++c.zero;
    else if (rel > 0) ++c.plus;
    else ++c.minus;
  }
  return c;
}

}  // namespace

double l1_energy(const std::vector<Rotation>& z, const MeasurementGraph& graph) {
  require_so2(graph, z);
  double total = 0.0;
  for (const auto& e : graph.edges()) {
    const double est = e.measurement.angle() + z[static_cast<std::size_t>(e.k)].angle();
    total += std::abs(wrap_angle(z[static_cast<std::size_t>(e.j)].angle() - est));
  }
  return total;
}

double coordinate_energy(int j, const Rotation& y, const std::vector<Rotation>& z, const MeasurementGraph& graph) {
  require_so2(graph, z);
  double total = 0.0;
  for (const auto& [k, a] : estimates(j, z, graph)) total += std::abs(wrap_angle(y.angle() - a));
  return total;
}

EstimatePartition partition(int j, const std::vector<Rotation>& z, const MeasurementGraph& graph) {
  require_so2(graph, z);
  const double y = z[static_cast<std::size_t>(j)].angle();
  EstimatePartition p;
  for (const auto& [k, a] : estimates(j, z, graph)) {
    const double rel = wrap_angle(a - y);
    if (kPi - std::abs(rel) < kCutTolerance) p.cut.push_back(k);
    else if (std::abs(rel) <= kZeroTolerance) p.c_zero.push_back(k);
    else if (rel > 0) p.c_plus.push_back(k);
    else p.c_minus.push_back(k);
  }
  return p;
}

double directional_derivative(int j, int v, const std::vector<Rotation>& z, const MeasurementGraph& graph) {
  if (v != 1 && v != -1) throw SyncError(ErrorKind::InvalidArgument, "direction must be +1 or -1");
  require_so2(graph, z);
  return count_at(z[static_cast<std::size_t>(j)].angle(), estimates(j, z, graph)).derivative(v);
}

double gd_l1_update_node(int j, std::vector<Rotation>& z, const MeasurementGraph& graph) {
  require_so2(graph, z);
  const double y0 = z[static_cast<std::size_t>(j)].angle();
  const auto est = estimates(j, z, graph);
  const Counts c0 = count_at(y0, est);
  const double dp = c0.derivative(1), dm = c0.derivative(-1);
  if (std::min(dp, dm) >= 0.0) return 0.0;
  const int v = dp <= dm ? 1 : -1;

  // Distances along v to every estimate and every antipode, within (0, pi].
  std::vector<double> stops;
  for (const auto& [k, a] : est) {
    for (double target : {a, a + kPi}) {
      double t = std::fmod(v * (target - y0), 2.0 * kPi);
      if (t < 0.0) t += 2.0 * kPi;
      if (t > kCutTolerance && t <= kPi + kCutTolerance) stops.push_back(std::min(t, kPi));
    }
  }
  std::sort(stops.begin(), stops.end());
  for (double t : stops) {
    const double y = wrap_angle(y0 + v * t);
    if (count_at(y, est).derivative(v) >= 0.0) {
      z[static_cast<std::size_t>(j)] = Rotation::from_angle(y);
      return t;
    }
  }
  throw SyncError(ErrorKind::NoBreakpoint, "no breakpoint ends the descent at node " + std::to_string(j));
}

FixedPointReport is_coordinatewise_fixed(const std::vector<Rotation>& z, const MeasurementGraph& graph) {
  require_so2(graph, z);
  FixedPointReport rep;
  for (int j = 0; j < graph.n(); ++j) {
    const Counts c = count_at(z[static_cast<std::size_t>(j)].angle(), estimates(j, z, graph));
    if (std::min(c.derivative(1), c.derivative(-1)) < 0.0) {
      rep.fixed = false;
      rep.non_fixed.push_back(j);
    }
  }
  return rep;
}

RunTrace gd_l1_run(const Scenario& scenario, const RunControls& controls, bool stop_on_fixed,
                   SyncState* final_state) {
  require_so2(scenario.graph, scenario.init);
  SyncState state{scenario.init, 0};
  auto update = [&](SyncState& st, int j) { return gd_l1_update_node(j, st.estimates, scenario.graph); };
  RunTrace trace = detail::run_cyclic(
      scenario, state, controls, update, detail::cyclic_order(),
      [stop_on_fixed](double max_step) { return stop_on_fixed && max_step == 0.0; }, true);
  trace.coordinatewise_fixed = is_coordinatewise_fixed(state.estimates, scenario.graph).fixed;
  if (final_state) *final_state = std::move(state);
  return trace;
}

}  // namespace ddsync
