#include "ddsync/manifold.hpp"

#include <Eigen/Geometry>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ddsync {

namespace {

constexpr double kPi = std::numbers::pi;

void require_same_dim(const Rotation& a, const Rotation& b) {
  if (a.dim() != b.dim()) {
    throw SyncError(ErrorKind::DimensionMismatch,
                    "rotations of dimension " + std::to_string(a.dim()) + " and " +
                        std::to_string(b.dim()));
  }
}

// Axis-angle vector of a 3x3 skew matrix.
Eigen::Vector3d skew_to_axis(const Eigen::MatrixXd& a) {
  return {a(2, 1), a(0, 2), a(1, 0)};
}

Eigen::Matrix3d axis_to_skew(const Eigen::Vector3d& w) {
  Eigen::Matrix3d k;
  k << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return k;
}

Eigen::Matrix3d so3_exp(const Eigen::Vector3d& w) {
  const double theta2 = w.squaredNorm();
  const Eigen::Matrix3d k = axis_to_skew(w);
  double a, b;
  if (theta2 < 1e-16) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    const double theta = std::sqrt(theta2);
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  return Eigen::Matrix3d::Identity() + a * k + b * k * k;
}

// Log of a rotation matrix as an axis-angle vector; throws on the cut locus.
Eigen::Vector3d so3_log(const Eigen::Matrix3d& m) {
  const Eigen::Vector3d w(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
                          0.5 * (m(1, 0) - m(0, 1)));
  const double s = w.norm();
  const double c = std::clamp(0.5 * (m.trace() - 1.0), -1.0, 1.0);
  const double theta = std::atan2(s, c);
  if (kPi - theta < kCutTolerance) {
    throw SyncError(ErrorKind::CutLocus, "rotation angle within tolerance of pi");
  }
  if (theta < 1e-8) return w * (1.0 + theta * theta / 6.0);
  if (c > -0.999) return w * (theta / s);

  // Near pi the antisymmetric part is small; recover the axis from the
  // symmetric part (1 - c) a a^T instead.
  const Eigen::Matrix3d b = 0.5 * (m + m.transpose()) - c * Eigen::Matrix3d::Identity();
  int k = 0;
  b.diagonal().maxCoeff(&k);
  Eigen::Vector3d axis = b.col(k) / std::sqrt(b(k, k) * (1.0 - c));
  axis.normalize();
  if (axis.dot(w) < 0.0) axis = -axis;
  return theta * axis;
}

double so3_angle(const Eigen::Matrix3d& m) {
  const Eigen::Vector3d w(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
                          0.5 * (m(1, 0) - m(0, 1)));
  const double c = std::clamp(0.5 * (m.trace() - 1.0), -1.0, 1.0);
  return std::atan2(w.norm(), c);
}

bool has_antipodal_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  for (const auto& lambda : es.eigenvalues()) {
    if (std::abs(std::abs(std::arg(lambda)) - kPi) < kCutTolerance) return true;
  }
  return false;
}

}  // namespace

int tangent_dim(int dim) { return dim * (dim - 1) / 2; }

double wrap_angle(double theta) {
  if (theta > -kPi && theta <= kPi) return theta;
  double r = std::remainder(theta, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

// ---------------------------------------------------------------------------
// Rotation

Rotation::Rotation() : m_(Eigen::MatrixXd::Identity(2, 2)) {}

Rotation Rotation::identity(int dim) {
  if (dim < 2) throw SyncError(ErrorKind::InvalidArgument, "rotation dimension must be >= 2");
  return Rotation(Eigen::MatrixXd::Identity(dim, dim));
}

Rotation Rotation::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw SyncError(ErrorKind::InvalidArgument, "rotation must be a square matrix of size >= 2");
  }
  Rotation r(m);
  const double err = r.orthogonality_error();
  if (!(err <= kRotationTolerance)) {
    throw SyncError(ErrorKind::InvalidArgument,
                    "matrix is not in SO(D) (error " + std::to_string(err) + ")");
  }
  return r;
}

Rotation Rotation::from_angle(double theta) {
  Eigen::MatrixXd m(2, 2);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  m << c, -s, s, c;
  return Rotation(std::move(m));
}

Rotation Rotation::from_row_major(int dim, std::span<const double> entries) {
  if (dim < 2 || entries.size() != static_cast<std::size_t>(dim * dim)) {
    throw SyncError(ErrorKind::InvalidArgument, "expected " + std::to_string(dim * dim) +
                                                    " entries for a rotation of dimension " +
                                                    std::to_string(dim));
  }
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = entries[static_cast<std::size_t>(r * dim + c)];
  return from_matrix(m);
}

Rotation Rotation::trusted(Eigen::MatrixXd m) { return Rotation(std::move(m)); }

double Rotation::angle() const {
  if (dim() != 2) throw SyncError(ErrorKind::DimensionMismatch, "angle() requires SO(2)");
  return std::atan2(m_(1, 0), m_(0, 0));
}

Rotation Rotation::operator*(const Rotation& rhs) const {
  require_same_dim(*this, rhs);
  return Rotation(m_ * rhs.m_);
}

std::vector<double> Rotation::to_row_major() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(dim() * dim()));
  for (int r = 0; r < dim(); ++r)
    for (int c = 0; c < dim(); ++c) out.push_back(m_(r, c));
  return out;
}

double Rotation::orthogonality_error() const {
  const Eigen::MatrixXd e = m_.transpose() * m_ - Eigen::MatrixXd::Identity(dim(), dim());
  return std::max(e.cwiseAbs().maxCoeff(), std::abs(m_.determinant() - 1.0));
}

// ---------------------------------------------------------------------------
// Tangent coordinates

Eigen::MatrixXd hat(const Eigen::VectorXd& coords, int dim) {
  if (coords.size() != tangent_dim(dim)) {
    throw SyncError(ErrorKind::DimensionMismatch, "tangent coordinates have length " +
                                                      std::to_string(coords.size()) + ", expected " +
                                                      std::to_string(tangent_dim(dim)));
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  int k = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j, ++k) {
      a(j, i) = coords(k) / kSqrt2;
      a(i, j) = -coords(k) / kSqrt2;
    }
  }
  return a;
}

Eigen::VectorXd vee(const Eigen::MatrixXd& skew) {
  const int dim = static_cast<int>(skew.rows());
  Eigen::VectorXd c(tangent_dim(dim));
  int k = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j, ++k) c(k) = kSqrt2 * 0.5 * (skew(j, i) - skew(i, j));
  return c;
}

Eigen::MatrixXd TangentVector::ambient() const { return base.matrix() * hat(coords, base.dim()); }

// ---------------------------------------------------------------------------
// Exponential / logarithm

Rotation exp_coords(const Rotation& base, const Eigen::VectorXd& coords) {
  const int dim = base.dim();
  if (coords.size() != tangent_dim(dim)) {
    throw SyncError(ErrorKind::DimensionMismatch, "tangent coordinates do not match base dimension");
  }
  if (dim == 2) return Rotation::from_angle(wrap_angle(base.angle() + coords(0) / kSqrt2));
  const Eigen::MatrixXd a = hat(coords, dim);
  if (dim == 3) return Rotation::trusted(base.matrix() * so3_exp(skew_to_axis(a)));
  const Eigen::MatrixXd e = a.exp();
  return Rotation::trusted(base.matrix() * e);
}

Eigen::VectorXd log_coords(const Rotation& base, const Rotation& target) {
  require_same_dim(base, target);
  const int dim = base.dim();
  if (dim == 2) {
    const double rel = wrap_angle(target.angle() - base.angle());
    if (kPi - std::abs(rel) < kCutTolerance) {
      throw SyncError(ErrorKind::CutLocus, "target is antipodal to base on SO(2)");
    }
    Eigen::VectorXd c(1);
    c(0) = kSqrt2 * rel;
    return c;
  }
  const Eigen::MatrixXd m = base.matrix().transpose() * target.matrix();
  if (dim == 3) return vee(axis_to_skew(so3_log(m)));
  if (has_antipodal_eigenvalue(m)) {
    throw SyncError(ErrorKind::CutLocus, "relative rotation has an eigenvalue at -1");
  }
  const Eigen::MatrixXd l = m.log();
  return vee(0.5 * (l - l.transpose()));
}

Rotation exp_map(const Rotation& base, const TangentVector& v) {
  require_same_dim(base, v.base);
  if ((base.matrix() - v.base.matrix()).cwiseAbs().maxCoeff() > kRotationTolerance) {
    throw SyncError(ErrorKind::InvalidArgument, "tangent vector is attached to a different base");
  }
  return exp_coords(base, v.coords);
}

TangentVector log_map(const Rotation& base, const Rotation& target) {
  return TangentVector{base, log_coords(base, target)};
}

double geodesic_distance(const Rotation& a, const Rotation& b) {
  require_same_dim(a, b);
  const int dim = a.dim();
  if (dim == 2) return kSqrt2 * std::abs(wrap_angle(a.angle() - b.angle()));
  const Eigen::MatrixXd m = a.matrix() * b.matrix().transpose();
  if (dim == 3) return kSqrt2 * so3_angle(m);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  double sum = 0.0;
  for (const auto& lambda : es.eigenvalues()) {
    const double t = std::arg(lambda);
    sum += t * t;
  }
  return std::sqrt(sum);
}

double angular_distance(UnitComplex a, UnitComplex b) {
  return std::abs(wrap_angle(a.angle() - b.angle()));
}

Rotation geodesic_point(const Rotation& a, const Rotation& b, double t) {
  return exp_coords(a, t * log_coords(a, b));
}

Rotation random_rotation(int dim, Rng& rng) {
  if (dim < 2) throw SyncError(ErrorKind::InvalidArgument, "rotation dimension must be >= 2");
  if (dim == 2) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    return Rotation::from_angle(wrap_angle(u(rng)));
  }
  std::normal_distribution<double> g(0.0, 1.0);
  if (dim == 3) {
    Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
    q.normalize();
    return Rotation::trusted(Eigen::MatrixXd(q.toRotationMatrix()));
  }
  Eigen::MatrixXd x(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) x(r, c) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    if (r(c, c) < 0) q.col(c) = -q.col(c);
  }
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return Rotation::trusted(std::move(q));
}

// ---------------------------------------------------------------------------
// Enclosing balls

namespace {

struct EuclidBall {
  Eigen::VectorXd center;
  double radius2 = -1.0;  // negative: empty
};

EuclidBall ball_from_support(const std::vector<const Eigen::VectorXd*>& support, int dim) {
  EuclidBall b;
  if (support.empty()) {
    b.center = Eigen::VectorXd::Zero(dim);
    return b;
  }
  const Eigen::VectorXd& p0 = *support[0];
  if (support.size() == 1) {
    b.center = p0;
    b.radius2 = 0.0;
    return b;
  }
  const int k = static_cast<int>(support.size()) - 1;
  Eigen::MatrixXd a(dim, k);
  for (int i = 0; i < k; ++i) a.col(i) = *support[static_cast<std::size_t>(i + 1)] - p0;
  const Eigen::MatrixXd gram = a.transpose() * a;
  const Eigen::VectorXd rhs = 0.5 * gram.diagonal();
  const Eigen::VectorXd lambda = gram.completeOrthogonalDecomposition().solve(rhs);
  b.center = p0 + a * lambda;
  double r2 = 0.0;
  for (const auto* p : support) r2 = std::max(r2, (*p - b.center).squaredNorm());
  b.radius2 = r2;
  return b;
}

bool outside(const EuclidBall& b, const Eigen::VectorXd& p) {
  if (b.radius2 < 0) return true;
  const double d2 = (p - b.center).squaredNorm();
  return d2 > b.radius2 * (1.0 + 1e-12) + 1e-300;
}

EuclidBall welzl(const std::vector<const Eigen::VectorXd*>& pts, std::size_t n,
                 std::vector<const Eigen::VectorXd*>& support, int dim) {
  if (n == 0 || static_cast<int>(support.size()) == dim + 1) return ball_from_support(support, dim);
  const Eigen::VectorXd* p = pts[n - 1];
  EuclidBall b = welzl(pts, n - 1, support, dim);
  if (!outside(b, *p)) return b;
  support.push_back(p);
  b = welzl(pts, n - 1, support, dim);
  support.pop_back();
  return b;
}

double max_distance(const Rotation& c, std::span<const Rotation> points) {
  double r = 0.0;
  for (const auto& p : points) r = std::max(r, geodesic_distance(c, p));
  return r;
}

Ball enclosing_ball_so2(std::span<const Rotation> points) {
  std::vector<UnitComplex> z;
  z.reserve(points.size());
  for (const auto& p : points) z.push_back(UnitComplex::from_rotation(p));
  const Arc arc = enclosing_arc_unchecked(z);
  return Ball{arc.center.to_rotation(), kSqrt2 * arc.radius};
}

}  // namespace

std::pair<Eigen::VectorXd, double> euclidean_enclosing_ball(std::span<const Eigen::VectorXd> points) {
  if (points.empty()) throw SyncError(ErrorKind::InvalidArgument, "no points");
  const int dim = static_cast<int>(points[0].size());
  std::vector<const Eigen::VectorXd*> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back(&p);
  // Fixed shuffle keeps the expected linear running time and determinism.
  std::mt19937 shuffle_rng(12345);
  std::shuffle(pts.begin(), pts.end(), shuffle_rng);
  std::vector<const Eigen::VectorXd*> support;
  const EuclidBall b = welzl(pts, pts.size(), support, dim);
  double r = 0.0;
  for (const auto& p : points) r = std::max(r, (p - b.center).norm());
  return {b.center, r};
}

Ball enclosing_ball_unchecked(std::span<const Rotation> points) {
  if (points.empty()) throw SyncError(ErrorKind::InvalidArgument, "no points to enclose");
  const int dim = points[0].dim();
  for (const auto& p : points) require_same_dim(points[0], p);
  if (points.size() == 1) return Ball{points[0], 0.0};
  if (dim == 2) return enclosing_ball_so2(points);

  // Riemannian Badoiu-Clarkson: step toward the farthest point by 1/(k+1).
  Rotation center = points[0];
  double radius = max_distance(center, points);
  for (int k = 1; k <= 200; ++k) {
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d = geodesic_distance(center, points[i]);
      if (d > far_d) far_d = d, far = i;
    }
    const Rotation next = geodesic_point(center, points[far], 1.0 / (k + 1.0));
    const double next_r = max_distance(next, points);
    const double improvement = radius - next_r;
    center = next;
    radius = next_r;
    if (std::abs(improvement) < 1e-9) break;
  }

  // Refinement: recenter on the Euclidean minimax ball of the log-mapped
  // points. The fixed point has 0 in the hull of the farthest logs, which is
  // the optimality condition of the Riemannian minimax problem.
  std::vector<Eigen::VectorXd> logs(points.size());
  double step_scale = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    for (std::size_t i = 0; i < points.size(); ++i) logs[i] = log_coords(center, points[i]);
    const auto [c, r] = euclidean_enclosing_ball(logs);
    if (c.norm() < 1e-15) break;
    const Rotation candidate = exp_coords(center, step_scale * c);
    const double cand_r = max_distance(candidate, points);
    if (cand_r <= radius) {
      const double gain = radius - cand_r;
      center = candidate;
      radius = cand_r;
      if (gain < 1e-15 && step_scale * c.norm() < 1e-13) break;
    } else {
      step_scale *= 0.5;
      if (step_scale < 1e-6) break;
    }
  }
  return Ball{center, radius};
}

Ball smallest_enclosing_ball(std::span<const Rotation> points) {
  Ball b = enclosing_ball_unchecked(points);
  if (b.radius >= kPi / 2.0) {
    throw NoSmallBallError("enclosing radius " + std::to_string(b.radius) + " is not below pi/2",
                           std::move(b));
  }
  return b;
}

Arc enclosing_arc_unchecked(std::span<const UnitComplex> points) {
  if (points.empty()) throw SyncError(ErrorKind::InvalidArgument, "no points to enclose");
  std::vector<double> a;
  a.reserve(points.size());
  for (const auto& z : points) a.push_back(z.angle());
  std::sort(a.begin(), a.end());
  // The covering arc is the complement of the largest circular gap.
  std::size_t gap_end = 0;
  double best_gap = a.front() + 2.0 * kPi - a.back();
  for (std::size_t i = 1; i < a.size(); ++i) {
    const double gap = a[i] - a[i - 1];
    if (gap > best_gap) best_gap = gap, gap_end = i;
  }
  const double width = 2.0 * kPi - best_gap;
  const double start = a[gap_end];
  return Arc{UnitComplex(start + 0.5 * width), 0.5 * width};
}

Arc smallest_enclosing_arc(std::span<const UnitComplex> points) {
  const Arc arc = enclosing_arc_unchecked(points);
  if (arc.radius >= kPi / 2.0) {
    throw NoSmallBallError("covering arc radius " + std::to_string(arc.radius) +
                               " is not below pi/2",
                           Ball{arc.center.to_rotation(), kSqrt2 * arc.radius});
  }
  return arc;
}

}  // namespace ddsync
