#pragma once

// Independent reference computations for the unit tests. None of these call
// the library routine they are used to check.

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace oracle {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rotation about a unit axis via Eigen's own angle-axis conversion.
inline Mat3 axis_angle(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

inline Mat3 rot_x(double c) { return axis_angle(Vec3::UnitX(), c); }
inline Mat3 rot_y(double b) { return axis_angle(Vec3::UnitY(), b); }
inline Mat3 rot_z(double a) { return axis_angle(Vec3::UnitZ(), a); }

/// Roots of det(lambda I - A) for symmetric A, by scanning the Gershgorin
/// interval for sign changes and bisecting each bracket. Ascending.
inline std::array<double, 3> eigenvalues_by_bisection(const Mat3& a) {
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i < 3; ++i) {
    double r = 0.0;
    for (int j = 0; j < 3; ++j) {
      if (j != i) r += std::abs(a(i, j));
    }
    lo = std::min(lo, a(i, i) - r);
    hi = std::max(hi, a(i, i) + r);
  }
  lo -= 1e-9;
  hi += 1e-9;
  auto p = [&](double x) { return (x * Mat3::Identity() - a).determinant(); };
  std::array<double, 3> roots{};
  int found = 0;
  constexpr int kGrid = 20000;
  double x0 = lo, f0 = p(lo);
  for (int k = 1; k <= kGrid && found < 3; ++k) {
    const double x1 = lo + (hi - lo) * k / kGrid;
    const double f1 = p(x1);
    if (f0 == 0.0) {
      roots[static_cast<std::size_t>(found++)] = x0;
    } else if (f0 * f1 < 0.0) {
      double l = x0, r = x1, fl = f0;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (l + r);
        const double fm = p(m);
        if (fl * fm <= 0.0) {
          r = m;
        } else {
          l = m;
          fl = fm;
        }
      }
      roots[static_cast<std::size_t>(found++)] = 0.5 * (l + r);
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

/// max ||M x|| over unit x, by power iteration on M^T M from several starts.
inline double spectral_norm_sampled(const Mat3& m) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  const Mat3 g = m.transpose() * m;
  double best = 0.0;
  for (int s = 0; s < 16; ++s) {
    Vec3 x(n(rng), n(rng), n(rng));
    x.normalize();
    for (int it = 0; it < 500; ++it) {
      const Vec3 y = g * x;
      if (y.norm() == 0.0) break;
      x = y.normalized();
    }
    best = std::max(best, (m * x).norm());
  }
  return best;
}

/// Five-point central difference of a scalar function of one variable.
template <class F>
double derivative(F&& f, double x, double eps = 1e-3) {
  return (-f(x + 2 * eps) + 8 * f(x + eps) - 8 * f(x - eps) + f(x - 2 * eps)) / (12 * eps);
}

}  // namespace oracle
