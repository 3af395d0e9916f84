#include "ddsync/graph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace ddsync {

const char* to_string(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::Good: return "good";
    case EdgeLabel::Bad: return "bad";
    case EdgeLabel::Unknown: return "unknown";
  }
  return "unknown";
}

EdgeLabel parse_edge_label(const std::string& s) {
  if (s == "good") return EdgeLabel::Good;
  if (s == "bad") return EdgeLabel::Bad;
  if (s == "unknown") return EdgeLabel::Unknown;
  throw SyncError(ErrorKind::Parse, "edge label must be good, bad or unknown, got '" + s + "'");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

bool is_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n <= 1) return true;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  int components = n;
  for (auto [a, b] : edges) {
    const int ra = find(a), rb = find(b);
    if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb, --components;
  }
  return components == 1;
}

MeasurementGraph::MeasurementGraph(int n, int dim, std::vector<Edge> edges)
    : n_(n), dim_(dim), edges_(std::move(edges)) {
  if (n < 1) throw SyncError(ErrorKind::InvalidArgument, "graph needs at least one node");
  if (dim < 2) throw SyncError(ErrorKind::InvalidArgument, "rotation dimension must be >= 2");
  for (auto& e : edges_) {
    if (e.j < 0 || e.k < 0 || e.j >= n || e.k >= n) {
      throw SyncError(ErrorKind::InvalidArgument,
                      "edge (" + std::to_string(e.j) + ", " + std::to_string(e.k) + ") is outside [0, n)");
    }
    if (e.j == e.k) throw SyncError(ErrorKind::InvalidArgument, "self loop at node " + std::to_string(e.j));
    if (e.measurement.dim() != dim) {
      throw SyncError(ErrorKind::DimensionMismatch, "edge measurement dimension differs from graph dimension");
    }
    if (e.j > e.k) {
      std::swap(e.j, e.k);
      e.measurement = e.measurement.transpose();
    }
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return std::pair(a.j, a.k) < std::pair(b.j, b.k); });
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (i > 0 && edges_[i].j == edges_[i - 1].j && edges_[i].k == edges_[i - 1].k) {
      throw SyncError(ErrorKind::InvalidArgument, "duplicate edge (" + std::to_string(edges_[i].j) + ", " +
                                                      std::to_string(edges_[i].k) + ")");
    }
    pairs.emplace_back(edges_[i].j, edges_[i].k);
  }
  if (!is_connected(n, pairs)) throw SyncError(ErrorKind::Disconnected, "measurement graph is not connected");
  adj_.assign(static_cast<std::size_t>(n), {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const int idx = static_cast<int>(i);
    adj_[static_cast<std::size_t>(edges_[i].j)].push_back({edges_[i].k, idx});
    adj_[static_cast<std::size_t>(edges_[i].k)].push_back({edges_[i].j, idx});
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
}

Rotation MeasurementGraph::relative(int j, const Neighbor& nb) const {
  const Edge& e = edges_.at(static_cast<std::size_t>(nb.edge));
  return e.j == j ? e.measurement : e.measurement.transpose();
}

std::optional<int> MeasurementGraph::edge_index(int j, int k) const {
  if (j < 0 || j >= n_) return std::nullopt;
  for (const auto& nb : adjacency(j))
    if (nb.node == k) return nb.edge;
  return std::nullopt;
}

Rotation MeasurementGraph::measurement(int j, int k) const {
  const auto idx = edge_index(j, k);
  if (!idx) {
    throw SyncError(ErrorKind::InvalidArgument,
                    "no edge between " + std::to_string(j) + " and " + std::to_string(k));
  }
  return relative(j, Neighbor{k, *idx});
}

bool MeasurementGraph::is_labeled() const {
  return std::none_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.label == EdgeLabel::Unknown; });
}

MeasurementGraph MeasurementGraph::with_edges(std::vector<Edge> edges) const {
  return MeasurementGraph(n_, dim_, std::move(edges));
}

Neighborhood neighborhoods(const MeasurementGraph& g, int j, bool split) {
  if (j < 0 || j >= g.n()) throw SyncError(ErrorKind::InvalidArgument, "node out of range");
  Neighborhood out;
  for (const auto& nb : g.adjacency(j)) {
    out.all.push_back(nb.node);
    if (!split) continue;
    switch (g.edges()[static_cast<std::size_t>(nb.edge)].label) {
      case EdgeLabel::Good: out.good.push_back(nb.node); break;
      case EdgeLabel::Bad: out.bad.push_back(nb.node); break;
      case EdgeLabel::Unknown:
        throw SyncError(ErrorKind::UnknownLabels, "edge labels are required to split a neighborhood");
    }
  }
  return out;
}

CorruptionStats corruption_stats(const MeasurementGraph& g) {
  if (!g.is_labeled()) throw SyncError(ErrorKind::UnknownLabels, "corruption statistics need labeled edges");
  CorruptionStats s;
  s.per_node.resize(static_cast<std::size_t>(g.n()));
  for (const auto& e : g.edges()) {
    for (int v : {e.j, e.k}) {
      auto& pn = s.per_node[static_cast<std::size_t>(v)];
      ++pn.degree;
      if (e.label == EdgeLabel::Bad) ++pn.bad;
    }
  }
  for (auto& pn : s.per_node) {
    pn.fraction = pn.degree ? static_cast<double>(pn.bad) / pn.degree : 0.0;
    s.alpha0 = std::max(s.alpha0, pn.fraction);
  }
  return s;
}

namespace {

using Mask = std::uint32_t;

// True when some j in J has strictly more neighbors outside J than inside.
bool subset_ok(Mask mask, const std::vector<Mask>& adj, const std::vector<int>& deg) {
  for (Mask rest = mask; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    const int inside = std::popcount(adj[static_cast<std::size_t>(j)] & mask);
    if (deg[static_cast<std::size_t>(j)] - inside > inside) return true;
  }
  return false;
}

std::vector<int> mask_to_nodes(Mask mask) {
  std::vector<int> out;
  for (; mask; mask &= mask - 1) out.push_back(std::countr_zero(mask));
  return out;
}

}  // namespace

WellConnectedReport is_well_connected(int n, const std::vector<std::pair<int, int>>& edges,
                                      const WellConnectedMode& mode) {
  WellConnectedReport rep;
  const int max_size = n / 2;
  if (mode.exhaustive) {
    if (n > kMaxExhaustiveNodes) {
      throw SyncError(ErrorKind::TooLarge, "exhaustive well-connectedness scan supports n <= " +
                                               std::to_string(kMaxExhaustiveNodes) + ", got " + std::to_string(n));
    }
    std::vector<Mask> adj(static_cast<std::size_t>(n), 0);
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (auto [a, b] : edges) {
      adj[static_cast<std::size_t>(a)] |= Mask{1} << b;
      adj[static_cast<std::size_t>(b)] |= Mask{1} << a;
      ++deg[static_cast<std::size_t>(a)];
      ++deg[static_cast<std::size_t>(b)];
    }
    // Largest subsets first, so a reported witness is a maximal violating J.
    const Mask end = Mask{1} << n;
    for (int size = max_size; size >= 1; --size) {
      for (Mask mask = (Mask{1} << size) - 1; mask < end;) {
        ++rep.subsets_checked;
        if (!subset_ok(mask, adj, deg)) {
          rep.verdict = Verdict::False;
          rep.witness = mask_to_nodes(mask);
          return rep;
        }
        // Next mask with the same popcount (Gosper).
        const Mask low = mask & (~mask + 1);
        const Mask ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
      }
    }
    rep.verdict = Verdict::True;
    return rep;
  }

  // Sampled falsification; works for any n via sorted adjacency lists.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  rep.verdict = Verdict::Unknown;
  if (max_size < 1) {
    rep.verdict = Verdict::True;
    return rep;
  }
  Rng rng(mode.seed);
  std::uniform_int_distribution<int> size_dist(1, max_size);
  std::vector<int> nodes(static_cast<std::size_t>(n));
  std::vector<char> in(static_cast<std::size_t>(n));
  for (int t = 0; t < mode.trials; ++t) {
    std::iota(nodes.begin(), nodes.end(), 0);
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const int s = size_dist(rng);
    std::fill(in.begin(), in.end(), 0);
    for (int i = 0; i < s; ++i) in[static_cast<std::size_t>(nodes[static_cast<std::size_t>(i)])] = 1;
    ++rep.subsets_checked;
    bool ok = false;
    for (int i = 0; i < s && !ok; ++i) {
      const int j = nodes[static_cast<std::size_t>(i)];
      int inside = 0;
      for (int k : adj[static_cast<std::size_t>(j)]) inside += in[static_cast<std::size_t>(k)];
      if (static_cast<int>(adj[static_cast<std::size_t>(j)].size()) - inside > inside) ok = true;
    }
    if (!ok) {
      rep.verdict = Verdict::False;
      rep.witness.assign(nodes.begin(), nodes.begin() + s);
      std::sort(rep.witness.begin(), rep.witness.end());
      return rep;
    }
  }
  return rep;
}

WellConnectedReport is_well_connected(const MeasurementGraph& g, const WellConnectedMode& mode) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(g.edges().size());
  for (const auto& e : g.edges()) pairs.emplace_back(e.j, e.k);
  return is_well_connected(g.n(), pairs, mode);
}

MeasurementGraph make_complete(int n, int dim) {
  if (n < 1) throw SyncError(ErrorKind::InvalidArgument, "graph needs at least one node");
  std::vector<Edge> edges;
  const Rotation id = Rotation::identity(dim);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) edges.push_back({j, k, id, EdgeLabel::Unknown});
  return MeasurementGraph(n, dim, std::move(edges));
}

MeasurementGraph make_erdos_renyi(int n, int dim, double p, Rng& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw SyncError(ErrorKind::InvalidArgument, "edge probability must lie in (0, 1]");
  if (n < 1) throw SyncError(ErrorKind::InvalidArgument, "graph needs at least one node");
  std::bernoulli_distribution coin(p);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (coin(rng)) pairs.emplace_back(j, k);
    if (!is_connected(n, pairs)) continue;
    std::vector<Edge> edges;
    const Rotation id = Rotation::identity(dim);
    for (auto [j, k] : pairs) edges.push_back({j, k, id, EdgeLabel::Unknown});
    return MeasurementGraph(n, dim, std::move(edges));
  }
  throw SyncError(ErrorKind::Disconnected, "Erdos-Renyi graph stayed disconnected after 100 attempts");
}

}  // namespace ddsync
