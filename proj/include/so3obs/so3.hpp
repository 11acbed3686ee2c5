#pragma once

#include <Eigen/Dense>

#include "so3obs/error.hpp"

namespace so3obs {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kOrthTol = 1e-9;
inline constexpr double kSkewTol = 1e-9;

/// Element of SO(3). Construction checks orthogonality and det = +1, so a
/// Rotation value is always on the group to within the tolerance it was
/// admitted with.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  /// Throws Error{Degenerate} when `m` is not a rotation to within `tol`.
  static Rotation from_matrix(const Mat3& m, double tol = kOrthTol);
  static Rotation identity() { return Rotation(); }

  const Mat3& matrix() const { return m_; }
  Rotation transpose() const { return Rotation(m_.transpose(), Unchecked{}); }
  Vec3 col(int j) const { return m_.col(j); }

  Rotation operator*(const Rotation& other) const {
    return Rotation(m_ * other.m_, Unchecked{});
  }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

 private:
  struct Unchecked {};
  Rotation(const Mat3& m, Unchecked) : m_(m) {}
  friend Rotation exp_hat(const Vec3& v);

  Mat3 m_;
};

/// Skew-symmetric cross-product matrix: hat(v) * w == v.cross(w).
Mat3 hat(const Vec3& v);

/// Inverse of hat. Throws Error{NotSkew} if ||M + M^T||_F > tol.
Vec3 vee(const Mat3& m, double tol = kSkewTol);

/// Rodrigues formula. Below 1e-8 rad the second-order series is used.
Rotation exp_hat(const Vec3& v);

/// Nearest rotation in Frobenius norm (polar factor). Throws
/// Error{Degenerate} for det(M) <= 0 or sigma_min < 1e-6.
Rotation project_rotation(const Mat3& m);

/// Largest singular value.
double spectral_norm(const Mat3& m);

/// exp(a e3^) exp(b e2^) exp(c e1^)
Rotation euler321(double a, double b, double c);

/// ||M^T M - I||_F
double orthogonality_defect(const Mat3& m);

}  // namespace so3obs
