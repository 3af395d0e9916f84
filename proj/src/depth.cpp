#include "ddsync/depth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>

namespace ddsync {

namespace {

constexpr double kPi = std::numbers::pi;
// Relative tolerance for "on the hyperplane" and "parallel" decisions.
constexpr double kPlaneTol = 1e-12;
// Event angles closer than this are treated as simultaneous in the sweep.
constexpr double kAngleTol = 1e-12;

void require_beta(double beta) {
  if (!(beta > 0.0 && beta <= 0.5)) {
    throw SyncError(ErrorKind::EmptyRegion, "beta must lie in (0, 1/2], got " + std::to_string(beta));
  }
}

std::vector<double> sorted_copy(std::span<const double> xs) {
  std::vector<double> s(xs.begin(), xs.end());
  std::sort(s.begin(), s.end());
  return s;
}

int ceil_index(double q, int n) { return std::max(1, static_cast<int>(std::ceil(q * n - 1e-9))); }

// Minimum over open direction cells of #{i : u.y_i > 0} for nonzero planar
// vectors, together with the angle of a direction attaining it. Sweeps u
// around the circle; each vector enters the open half-plane at angle
// psi - pi/2 and leaves at psi + pi/2.
std::pair<int, double> min_open_halfplane_count(const std::vector<Eigen::Vector2d>& ys) {
  const int m = static_cast<int>(ys.size());
  if (m == 0) return {0, 0.0};
  struct Event {
    double angle;
    int delta;
  };
  auto norm = [](double a) {
    a = std::fmod(a, 2.0 * kPi);
    return a < 0 ? a + 2.0 * kPi : a;
  };
  std::vector<Event> events;
  events.reserve(2 * static_cast<std::size_t>(m));
  std::vector<double> psi(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto& y = ys[static_cast<std::size_t>(i)];
    const double p = std::atan2(y.y(), y.x());
    psi[static_cast<std::size_t>(i)] = p;
    events.push_back({norm(p - kPi / 2.0), +1});
    events.push_back({norm(p + kPi / 2.0), -1});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.angle < b.angle; });

  // Start in the middle of the widest gap, far from any event.
  const std::size_t ne = events.size();
  std::size_t gap_after = ne - 1;
  double widest = events.front().angle + 2.0 * kPi - events.back().angle;
  for (std::size_t i = 0; i + 1 < ne; ++i) {
    const double g = events[i + 1].angle - events[i].angle;
    if (g > widest) widest = g, gap_after = i;
  }
  const double start = events[gap_after].angle + 0.5 * widest;
  int count = 0;
  for (double p : psi) {
    if (std::abs(wrap_angle(start - p)) < kPi / 2.0) ++count;
  }
  auto unwrapped = [&](std::size_t s) {
    const double a = events[(gap_after + s) % ne].angle;
    return a < start ? a + 2.0 * kPi : a;
  };
  int best = count;
  double best_angle = start;
  std::size_t s = 1;
  while (s <= ne) {
    double last = unwrapped(s);
    while (s <= ne && unwrapped(s) - last <= kAngleTol) {
      last = unwrapped(s);
      count += events[(gap_after + s) % ne].delta;
      ++s;
    }
    if (count < best) {
      best = count;
      const double next = s <= ne ? unwrapped(s) : start + 2.0 * kPi;
      best_angle = 0.5 * (last + next);
    }
  }
  return {best, best_angle};
}

struct DepthResult {
  int depth = 0;
  Eigen::VectorXd witness;  // a direction u attaining (or undercutting) the count
};

DepthResult depth_2d(const std::vector<Eigen::VectorXd>& ys, int zeros) {
  std::vector<Eigen::Vector2d> planar;
  planar.reserve(ys.size());
  for (const auto& y : ys) planar.emplace_back(y(0), y(1));
  const auto [count, angle] = min_open_halfplane_count(planar);
  Eigen::VectorXd u(2);
  u << std::cos(angle), std::sin(angle);
  return {zeros + count, u};
}

DepthResult depth_3d(const std::vector<Eigen::VectorXd>& ys, int zeros, int total, int floor) {
  const std::size_t m = ys.size();
  std::vector<Eigen::Vector3d> y(m);
  std::vector<double> len(m);
  for (std::size_t i = 0; i < m; ++i) {
    y[i] = ys[i].head<3>();
    len[i] = y[i].norm();
  }

  DepthResult res{total, Eigen::VectorXd::Zero(3)};
  bool any_pair = false;
  std::vector<Eigen::Vector2d> on_plane;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const Eigen::Vector3d c = y[i].cross(y[j]);
      const double cn = c.norm();
      if (cn <= kPlaneTol * len[i] * len[j]) continue;
      any_pair = true;
      const Eigen::Vector3d v = c / cn;
      const Eigen::Vector3d e1 = y[i] / len[i];
      const Eigen::Vector3d e2 = v.cross(e1);
      for (double s : {1.0, -1.0}) {
        // Directions near the vertex s*v: points strictly on its positive
        // side always count; points on the plane count according to a
        // planar subproblem.
        int pos = 0;
        on_plane.clear();
        for (std::size_t k = 0; k < m; ++k) {
          const double h = s * v.dot(y[k]);
          if (h > kPlaneTol * len[k]) {
            ++pos;
          } else if (h >= -kPlaneTol * len[k]) {
            on_plane.emplace_back(e1.dot(y[k]), s * e2.dot(y[k]));
          }
        }
        if (zeros + pos >= res.depth) continue;
        const auto [count, angle] = min_open_halfplane_count(on_plane);
        if (zeros + pos + count < res.depth) {
          res.depth = zeros + pos + count;
          res.witness = s * v + 1e-6 * (std::cos(angle) * e1 + std::sin(angle) * s * e2);
          if (res.depth <= floor) return res;
        }
      }
    }
  }
  if (!any_pair) {
    // All nonzero points lie on one line through x.
    int pos = 0;
    for (std::size_t k = 0; k < m; ++k)
      if (y[k].dot(y[0]) > 0) ++pos;
    const int neg = static_cast<int>(m) - pos;
    res.depth = zeros + std::min(pos, neg);
    res.witness = (pos <= neg ? 1.0 : -1.0) * y[0] / len[0];
  }
  return res;
}

DepthResult depth_impl(const Eigen::VectorXd& x, const PointCloud& cloud, int floor) {
  if (x.size() != cloud.dim) {
    throw SyncError(ErrorKind::DimensionMismatch, "query point does not match cloud dimension");
  }
  if (cloud.dim > 3) {
    throw SyncError(ErrorKind::UnsupportedDim,
                    "exact depth is implemented for dimension <= 3, got " + std::to_string(cloud.dim));
  }
  if (cloud.dim == 1) {
    int le = 0, ge = 0;
    for (const auto& p : cloud.points) {
      if (p(0) <= x(0)) ++le;
      if (p(0) >= x(0)) ++ge;
    }
    return {std::min(le, ge), Eigen::VectorXd::Constant(1, le < ge ? -1.0 : 1.0)};
  }
  const double scale = 1.0 + x.norm();
  int zeros = 0;
  std::vector<Eigen::VectorXd> ys;
  ys.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    Eigen::VectorXd y = p - x;
    if (y.norm() <= 1e-14 * scale) {
      ++zeros;
    } else {
      ys.push_back(std::move(y));
    }
  }
  if (ys.empty()) return {zeros, Eigen::VectorXd::Zero(cloud.dim)};
  if (cloud.dim == 2) return depth_2d(ys, zeros);
  return depth_3d(ys, zeros, cloud.size(), floor);
}

// Radon points of every (d+2)-subset: each has depth >= 2 within its subset
// and they cover the lower-dimensional depth regions that a volume search
// cannot hit.
void append_radon_points(const PointCloud& cloud, std::vector<Eigen::VectorXd>& out) {
  const int d = cloud.dim;
  const int n = cloud.size();
  const int r = d + 2;
  if (n < r) return;
  std::vector<int> idx(static_cast<std::size_t>(r));
  std::iota(idx.begin(), idx.end(), 0);
  Eigen::MatrixXd a(d + 1, r);
  while (true) {
    for (int c = 0; c < r; ++c) {
      a.block(0, c, d, 1) = cloud.points[static_cast<std::size_t>(idx[static_cast<std::size_t>(c)])];
      a(d, c) = 1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd lambda = svd.matrixV().col(r - 1);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(d);
    double w = 0.0;
    for (int c = 0; c < r; ++c) {
      if (lambda(c) > 0) {
        p += lambda(c) * cloud.points[static_cast<std::size_t>(idx[static_cast<std::size_t>(c)])];
        w += lambda(c);
      }
    }
    if (w > 0) out.push_back(p / w);
    int pos = r - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - r + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int c = pos + 1; c < r; ++c) idx[static_cast<std::size_t>(c)] = idx[static_cast<std::size_t>(c - 1)] + 1;
  }
}

double binomial(int n, int r) {
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

// Central-cut ellipsoid search for a point of depth >= k. A shallow
// halfspace through the current center excludes every point beyond it, so
// each witness direction is a valid cut.
std::optional<Eigen::VectorXd> ellipsoid_search(const PointCloud& cloud, int k, int budget) {
  const int d = cloud.dim;
  if (d < 2) return std::nullopt;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  for (const auto& p : cloud.points) c += p;
  c /= cloud.size();
  double radius = 0.0;
  for (const auto& p : cloud.points) radius = std::max(radius, (p - c).norm());
  Eigen::MatrixXd shape = Eigen::MatrixXd::Identity(d, d) * std::max(radius * radius, 1e-300);
  const double dd = d;
  for (int it = 0; it < budget; ++it) {
    const DepthResult r = depth_impl(c, cloud, k - 1);
    if (r.depth >= k) return c;
    const Eigen::VectorXd& u = r.witness;
    int count = 0;
    for (const auto& p : cloud.points)
      if (u.dot(p - c) >= 0.0) ++count;
    if (count >= k) return std::nullopt;  // unverified cut; stop rather than risk excluding the region
    const double q = u.dot(shape * u);
    if (!(q > 0.0)) return std::nullopt;
    const Eigen::VectorXd b = shape * u / std::sqrt(q);
    c -= b / (dd + 1.0);
    shape = (dd * dd / (dd * dd - 1.0)) * (shape - (2.0 / (dd + 1.0)) * b * b.transpose());
  }
  return std::nullopt;
}

}  // namespace

PointCloud::PointCloud(int d, std::vector<Eigen::VectorXd> pts) : dim(d), points(std::move(pts)) {
  if (dim < 1) throw SyncError(ErrorKind::InvalidArgument, "point cloud dimension must be >= 1");
  for (const auto& p : points) {
    if (p.size() != dim) {
      throw SyncError(ErrorKind::DimensionMismatch, "point of length " + std::to_string(p.size()) +
                                                        " in a cloud of dimension " + std::to_string(dim));
    }
  }
}

PointCloud PointCloud::from_scalars(std::span<const double> xs) {
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back(Eigen::VectorXd::Constant(1, x));
  return PointCloud(1, std::move(pts));
}

std::vector<double> PointCloud::scalars() const {
  if (dim != 1) throw SyncError(ErrorKind::DimensionMismatch, "scalars() requires a 1D cloud");
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p(0));
  return out;
}

SelectionRule SelectionRule::default_for(int dim) {
  SelectionRule r;
  r.variant = dim == 1 ? SelectionVariant::TrimmedMean : SelectionVariant::DeepestCandidate;
  return r;
}

const char* to_string(SelectionVariant v) {
  switch (v) {
    case SelectionVariant::TrimmedMean: return "trimmed_mean";
    case SelectionVariant::DeepestCandidate: return "deepest";
    case SelectionVariant::RandomInterior: return "random_interior";
  }
  return "unknown";
}

SelectionVariant parse_selection_variant(const std::string& name) {
  if (name == "trimmed_mean") return SelectionVariant::TrimmedMean;
  if (name == "deepest") return SelectionVariant::DeepestCandidate;
  if (name == "random_interior") return SelectionVariant::RandomInterior;
  throw SyncError(ErrorKind::InvalidArgument,
                  "unknown selection rule '" + name + "' (expected trimmed_mean, deepest, random_interior)");
}

int required_depth(double beta, int n) { return ceil_index(beta, n); }

int tukey_depth_1d(double x, std::span<const double> cloud) {
  int le = 0, ge = 0;
  for (double v : cloud) {
    if (v <= x) ++le;
    if (v >= x) ++ge;
  }
  return std::min(le, ge);
}

DepthInterval depth_region_1d(double beta, std::span<const double> cloud) {
  require_beta(beta);
  if (cloud.empty()) throw SyncError(ErrorKind::EmptyRegion, "empty cloud");
  const auto s = sorted_copy(cloud);
  const int n = static_cast<int>(s.size());
  const int k = required_depth(beta, n);
  const int hi = n + 1 - k;
  if (k > hi) throw SyncError(ErrorKind::EmptyRegion, "no point reaches depth " + std::to_string(k));
  return {s[static_cast<std::size_t>(k - 1)], s[static_cast<std::size_t>(hi - 1)]};
}

DepthInterval order_statistic_interval_1d(double beta, std::span<const double> cloud) {
  require_beta(beta);
  const auto s = sorted_copy(cloud);
  const int n = static_cast<int>(s.size());
  const int lo = static_cast<int>(std::ceil(beta * n - 1e-9));
  const int hi = static_cast<int>(std::floor((1.0 - beta) * n + 1e-9));
  if (lo < 1 || lo > hi || hi > n) {
    throw SyncError(ErrorKind::EmptyRegion, "order-statistic indices " + std::to_string(lo) + " > " +
                                                std::to_string(hi));
  }
  return {s[static_cast<std::size_t>(lo - 1)], s[static_cast<std::size_t>(hi - 1)]};
}

int tukey_depth_above(const Eigen::VectorXd& x, const PointCloud& cloud, int floor) {
  return depth_impl(x, cloud, floor).depth;
}

int tukey_depth(const Eigen::VectorXd& x, const PointCloud& cloud) { return tukey_depth_above(x, cloud, -1); }

double trimmed_mean_1d(std::span<const double> cloud, double p) {
  if (cloud.empty()) throw SyncError(ErrorKind::InvalidArgument, "trimmed mean of an empty cloud");
  const auto s = sorted_copy(cloud);
  const int n = static_cast<int>(s.size());
  const double lo = s[static_cast<std::size_t>(ceil_index(p, n) - 1)];
  const double hi = s[static_cast<std::size_t>(ceil_index(1.0 - p, n) - 1)];
  double sum = 0.0;
  int count = 0;
  for (double v : s) {
    if (lo <= v && v <= hi) sum += v, ++count;
  }
  return sum / count;
}

Eigen::VectorXd max_depth_point(const PointCloud& cloud, double beta, const SelectionRule& rule, Rng& rng) {
  const int n = cloud.size();
  if (n == 0) throw SyncError(ErrorKind::InvalidArgument, "cannot select from an empty cloud");
  if (!(beta > 0.0 && beta < 0.5 + 1e-15)) {
    throw SyncError(ErrorKind::InvalidArgument, "beta must lie in (0, 1/2]");
  }
  const int d = cloud.dim;
  if (rule.variant == SelectionVariant::TrimmedMean) {
    if (d != 1) throw SyncError(ErrorKind::InvalidArgument, "the trimmed-mean rule needs a 1D cloud");
    const auto xs = cloud.scalars();
    return Eigen::VectorXd::Constant(1, trimmed_mean_1d(xs, beta));
  }
  const int k = required_depth(beta, n);

  std::vector<Eigen::VectorXd> cands(cloud.points.begin(), cloud.points.end());
  const std::size_t first_synthetic = cands.size();
  {
    Eigen::VectorXd median(d), trimmed(d), mean = Eigen::VectorXd::Zero(d);
    std::vector<double> coord(static_cast<std::size_t>(n));
    for (int c = 0; c < d; ++c) {
      for (int i = 0; i < n; ++i) coord[static_cast<std::size_t>(i)] = cloud.points[static_cast<std::size_t>(i)](c);
      std::sort(coord.begin(), coord.end());
      median(c) = n % 2 ? coord[static_cast<std::size_t>(n / 2)]
                        : 0.5 * (coord[static_cast<std::size_t>(n / 2 - 1)] + coord[static_cast<std::size_t>(n / 2)]);
      trimmed(c) = trimmed_mean_1d(coord, 0.25);
    }
    for (const auto& p : cloud.points) mean += p;
    mean /= n;
    cands.push_back(median);
    cands.push_back(trimmed);
    cands.push_back(mean);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        cands.push_back(0.5 * (cloud.points[static_cast<std::size_t>(i)] + cloud.points[static_cast<std::size_t>(j)]));
  }

  std::vector<int> depth(cands.size());
  for (std::size_t c = 0; c < cands.size(); ++c) depth[c] = tukey_depth_above(cands[c], cloud, k - 1);

  auto any_qualifies = [&] { return std::any_of(depth.begin(), depth.end(), [&](int v) { return v >= k; }); };
  auto add_candidate = [&](Eigen::VectorXd p) {
    depth.push_back(tukey_depth_above(p, cloud, k - 1));
    cands.push_back(std::move(p));
  };
  if (!any_qualifies() && n <= 30) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int l = j + 1; l < n; ++l)
          add_candidate((cloud.points[static_cast<std::size_t>(i)] + cloud.points[static_cast<std::size_t>(j)] +
                         cloud.points[static_cast<std::size_t>(l)]) /
                        3.0);
  }
  if (!any_qualifies() && d >= 2 && binomial(n, d + 2) <= 5000) {
    std::vector<Eigen::VectorXd> radon;
    append_radon_points(cloud, radon);
    for (auto& p : radon) add_candidate(std::move(p));
  }
  if (!any_qualifies()) {
    if (auto found = ellipsoid_search(cloud, k, rule.search_budget)) return *found;
    throw SyncError(ErrorKind::DepthSearchFailed,
                    "no point of depth " + std::to_string(k) + " found among candidates or within " +
                        std::to_string(rule.search_budget) + " search steps");
  }

  std::vector<std::size_t> qualifying;
  for (std::size_t c = 0; c < cands.size(); ++c)
    if (depth[c] >= k) qualifying.push_back(c);

  if (rule.variant == SelectionVariant::RandomInterior) {
    std::exponential_distribution<double> e(1.0);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
    double total = 0.0;
    for (std::size_t c : qualifying) {
      const double w = e(rng);
      out += w * cands[c];
      total += w;
    }
    out /= total;
    if (tukey_depth_above(out, cloud, k - 1) >= k) return out;
  }

  std::size_t best = qualifying.front();
  for (std::size_t c : qualifying)
    if (depth[c] > depth[best]) best = c;
  Eigen::VectorXd selected = cands[best];
  if (best < first_synthetic && qualifying.size() > 1) {
    // A data point sits on the boundary of its own depth region in generic
    // position; pull it slightly toward the qualifying centroid, which keeps
    // it inside the (convex) region.
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (std::size_t c : qualifying) centroid += cands[c];
    centroid /= static_cast<double>(qualifying.size());
    const Eigen::VectorXd nudged = selected + 1e-3 * (centroid - selected);
    if (tukey_depth_above(nudged, cloud, k - 1) >= k) selected = nudged;
  }
  return selected;
}

}  // namespace ddsync
