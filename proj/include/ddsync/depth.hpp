#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "ddsync/manifold.hpp"

namespace ddsync {

/// Points in R^dim; the tangent-coordinate clouds handed to the depth
/// routines.
struct PointCloud {
  int dim = 1;
  std::vector<Eigen::VectorXd> points;

  PointCloud() = default;
  PointCloud(int dim, std::vector<Eigen::VectorXd> points);
  static PointCloud from_scalars(std::span<const double> xs);

  int size() const { return static_cast<int>(points.size()); }
  std::vector<double> scalars() const;
};

/// Closed interval [lo, hi] whose endpoints are order statistics.
struct DepthInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

enum class SelectionVariant { TrimmedMean, DeepestCandidate, RandomInterior };

/// How a point is chosen from the beta-depth region.
struct SelectionRule {
  SelectionVariant variant = SelectionVariant::DeepestCandidate;
  int search_budget = 500;

  /// TrimmedMean for dim 1, DeepestCandidate otherwise.
  static SelectionRule default_for(int dim);
};

const char* to_string(SelectionVariant v);
SelectionVariant parse_selection_variant(const std::string& name);

/// ceil(beta * n), guarded against rounding when beta * n is an integer.
int required_depth(double beta, int n);

/// min(#{x_i <= x}, #{x_i >= x}).
int tukey_depth_1d(double x, std::span<const double> cloud);

/// The level set {x : depth(x) >= ceil(beta n)} = [x_(k), x_(n+1-k)] with
/// k = ceil(beta n). Throws EmptyRegion unless 0 < beta <= 1/2.
DepthInterval depth_region_1d(double beta, std::span<const double> cloud);

/// The order-statistic interval [x_(ceil(beta n)), x_(floor((1-beta) n))].
/// It is contained in depth_region_1d and is one index shorter at the top
/// whenever it is nonempty. Throws EmptyRegion when the indices cross.
DepthInterval order_statistic_interval_1d(double beta, std::span<const double> cloud);

/// Tukey depth with closed halfspaces: min over u != 0 of
/// #{i : u.(x_i - x) >= 0}. Exact for dim <= 3; UnsupportedDim above.
int tukey_depth(const Eigen::VectorXd& x, const PointCloud& cloud);

/// Exact depth when it exceeds `floor`; otherwise some value <= floor.
/// Lets threshold tests stop as soon as a shallow halfspace is found.
int tukey_depth_above(const Eigen::VectorXd& x, const PointCloud& cloud, int floor);

/// ave of {x : X_p <= x <= X_(1-p)} with X_q = x_(max(1, ceil(q n))).
double trimmed_mean_1d(std::span<const double> cloud, double p = 0.25);

/// A point of depth >= required_depth(beta, n) chosen by `rule`.
/// Throws DepthSearchFailed when no such point is found within the budget.
Eigen::VectorXd max_depth_point(const PointCloud& cloud, double beta, const SelectionRule& rule,
                                Rng& rng);

}  // namespace ddsync
