#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ddsync/error.hpp"

namespace ddsync {

using Rng = std::mt19937_64;

/// Rotation angle (radians) within which a target counts as on the cut locus.
inline constexpr double kCutTolerance = 1e-9;

/// Tolerance on |R^T R - I| entries and det(R) - 1 when validating input.
inline constexpr double kRotationTolerance = 1e-12;

/// Dimension D(D-1)/2 of the tangent space of SO(D).
int tangent_dim(int dim);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

/// Factor between the Frobenius-log metric on SO(2) and the angular metric:
/// d_F = sqrt(2) * d_angle.
inline constexpr double kSqrt2 = 1.41421356237309504880;

/// An element of SO(D), D >= 2, stored as a dense D x D matrix.
class Rotation {
 public:
  /// Identity in SO(2).
  Rotation();

  static Rotation identity(int dim);
  /// Validates orthogonality and det = +1 to kRotationTolerance.
  static Rotation from_matrix(const Eigen::MatrixXd& m);
  /// SO(2) rotation by theta.
  static Rotation from_angle(double theta);
  /// Row-major D^2 entries, validated.
  static Rotation from_row_major(int dim, std::span<const double> entries);
  /// Skips validation. Use only for products of valid rotations.
  static Rotation trusted(Eigen::MatrixXd m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }

  /// Angle in (-pi, pi]; SO(2) only.
  double angle() const;

  Rotation transpose() const { return Rotation(m_.transpose()); }
  Rotation operator*(const Rotation& rhs) const;

  std::vector<double> to_row_major() const;

  /// Largest absolute entry of R^T R - I together with |det R - 1|.
  double orthogonality_error() const;

 private:
  explicit Rotation(Eigen::MatrixXd m) : m_(std::move(m)) {}
  Eigen::MatrixXd m_;
};

/// Skew-symmetric matrix for tangent coordinates. The basis enumerates
/// (i, j), i < j, row by row; each element has +1/sqrt(2) at (j, i) and
/// -1/sqrt(2) at (i, j), so the coordinate norm equals the Frobenius norm.
Eigen::MatrixXd hat(const Eigen::VectorXd& coords, int dim);
Eigen::VectorXd vee(const Eigen::MatrixXd& skew);

/// Element of T_base SO(D) in the orthonormal coordinates of hat().
struct TangentVector {
  Rotation base;
  Eigen::VectorXd coords;

  /// The ambient matrix Delta = base * hat(coords).
  Eigen::MatrixXd ambient() const;
  double norm() const { return coords.norm(); }
};

struct Ball {
  Rotation center;
  double radius = 0.0;
};

/// A point on the unit circle, stored by its angle in (-pi, pi].
class UnitComplex {
 public:
  UnitComplex() = default;
  explicit UnitComplex(double angle) : angle_(wrap_angle(angle)) {}
  static UnitComplex from_complex(std::complex<double> z) { return UnitComplex(std::arg(z)); }
  static UnitComplex from_rotation(const Rotation& r) { return UnitComplex(r.angle()); }

  double angle() const { return angle_; }
  std::complex<double> value() const { return std::polar(1.0, angle_); }
  UnitComplex conj() const { return UnitComplex(-angle_); }
  UnitComplex operator*(UnitComplex rhs) const { return UnitComplex(angle_ + rhs.angle_); }
  Rotation to_rotation() const { return Rotation::from_angle(angle_); }

 private:
  double angle_ = 0.0;
};

struct Arc {
  UnitComplex center;
  double radius = 0.0;  // in the angular metric
};

/// Thrown by the enclosing-ball routines when the minimax radius is not below
/// pi/2; the computed ball is still available.
class NoSmallBallError : public SyncError {
 public:
  NoSmallBallError(const std::string& what, Ball ball)
      : SyncError(ErrorKind::NoSmallBall, what), ball_(std::move(ball)) {}
  const Ball& ball() const { return ball_; }

 private:
  Ball ball_;
};

Rotation exp_map(const Rotation& base, const TangentVector& v);
TangentVector log_map(const Rotation& base, const Rotation& target);

/// Coordinate-level versions used in inner loops.
Rotation exp_coords(const Rotation& base, const Eigen::VectorXd& coords);
Eigen::VectorXd log_coords(const Rotation& base, const Rotation& target);

/// ||log(a b^T)||_F; at the cut locus the principal value is used.
double geodesic_distance(const Rotation& a, const Rotation& b);

/// |arg(a conj(b))| in [0, pi].
double angular_distance(UnitComplex a, UnitComplex b);

/// Point at parameter t along the minimizing geodesic from a to b.
Rotation geodesic_point(const Rotation& a, const Rotation& b, double t);

/// Haar-distributed sample.
Rotation random_rotation(int dim, Rng& rng);

/// Minimax ball in the Frobenius-log metric. Exact for D = 2; for D >= 3 a
/// Badoiu-Clarkson start refined by repeated Euclidean minimum enclosing
/// balls of the log-mapped points. Throws NoSmallBallError when the radius
/// reaches pi/2.
Ball smallest_enclosing_ball(std::span<const Rotation> points);

/// Same as smallest_enclosing_ball but never throws NoSmallBallError.
Ball enclosing_ball_unchecked(std::span<const Rotation> points);

/// Minimal covering arc on the circle (angular metric). Throws
/// NoSmallBallError when the radius reaches pi/2.
Arc smallest_enclosing_arc(std::span<const UnitComplex> points);
Arc enclosing_arc_unchecked(std::span<const UnitComplex> points);

/// Exact minimum enclosing ball of Euclidean points (Welzl). Returns
/// {center, radius}.
std::pair<Eigen::VectorXd, double> euclidean_enclosing_ball(std::span<const Eigen::VectorXd> points);

}  // namespace ddsync
