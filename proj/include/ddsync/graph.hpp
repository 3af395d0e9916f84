#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddsync/manifold.hpp"

namespace ddsync {

enum class EdgeLabel { Good, Bad, Unknown };

const char* to_string(EdgeLabel label);
EdgeLabel parse_edge_label(const std::string& s);

/// Undirected measurement edge, stored once with j < k. The measurement is
/// R_jk; the reverse R_kj = R_jk^T is derived on demand.
struct Edge {
  int j = 0;
  int k = 0;
  Rotation measurement;
  EdgeLabel label = EdgeLabel::Unknown;
};

/// One entry of a node's adjacency list.
struct Neighbor {
  int node = 0;
  int edge = 0;  // index into MeasurementGraph::edges()
};

struct Neighborhood {
  std::vector<int> all;
  std::vector<int> good;
  std::vector<int> bad;
};

struct NodeCorruption {
  int degree = 0;
  int bad = 0;
  double fraction = 0.0;
};

struct CorruptionStats {
  double alpha0 = 0.0;
  std::vector<NodeCorruption> per_node;
};

/// Connected, simple, undirected graph of rotation measurements.
class MeasurementGraph {
 public:
  /// Normalizes every edge to j < k (transposing the measurement when
  /// needed), sorts edges by (j, k) and validates: node range, no self loops,
  /// no duplicate pairs, matching rotation dimension, connectivity.
  MeasurementGraph(int n, int dim, std::vector<Edge> edges);

  int n() const { return n_; }
  int dim() const { return dim_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Neighbor>& adjacency(int j) const { return adj_.at(static_cast<std::size_t>(j)); }
  int degree(int j) const { return static_cast<int>(adjacency(j).size()); }

  /// R_jk for a neighbor entry of node j.
  Rotation relative(int j, const Neighbor& nb) const;
  /// R_jk for an arbitrary edge; throws InvalidArgument if absent.
  Rotation measurement(int j, int k) const;
  std::optional<int> edge_index(int j, int k) const;

  /// True when no edge carries the Unknown label.
  bool is_labeled() const;

  /// Copy with replaced measurements/labels on the same topology.
  MeasurementGraph with_edges(std::vector<Edge> edges) const;

 private:
  int n_;
  int dim_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adj_;
};

bool is_connected(int n, const std::vector<std::pair<int, int>>& edges);

/// E^j split by label. Throws UnknownLabels when split requested on an
/// unlabeled graph.
Neighborhood neighborhoods(const MeasurementGraph& g, int j, bool split = true);

/// alpha0 = max_j #(E_b^j) / n_j. Throws UnknownLabels.
CorruptionStats corruption_stats(const MeasurementGraph& g);

enum class Verdict { True, False, Unknown };
const char* to_string(Verdict v);

struct WellConnectedMode {
  bool exhaustive = true;
  int trials = 0;
  std::uint64_t seed = 0;

  static WellConnectedMode exhaustive_scan() { return {}; }
  static WellConnectedMode sampled(int trials, std::uint64_t seed) { return {false, trials, seed}; }
};

struct WellConnectedReport {
  Verdict verdict = Verdict::Unknown;
  std::vector<int> witness;  // violating J when verdict is False
  long long subsets_checked = 0;
};

inline constexpr int kMaxExhaustiveNodes = 24;

/// Checks that every J with #J <= n/2 contains a node with strictly more
/// neighbors outside J than inside. Exhaustive mode scans all such subsets
/// (TooLarge above kMaxExhaustiveNodes); sampled mode can only falsify.
WellConnectedReport is_well_connected(const MeasurementGraph& g, const WellConnectedMode& mode);
WellConnectedReport is_well_connected(int n, const std::vector<std::pair<int, int>>& edges,
                                      const WellConnectedMode& mode);

/// Topology-only generators: identity measurements, Unknown labels.
MeasurementGraph make_complete(int n, int dim);
/// Resamples until connected (at most 100 attempts, else Disconnected).
MeasurementGraph make_erdos_renyi(int n, int dim, double p, Rng& rng);

}  // namespace ddsync
