#include "so3obs/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace so3obs {

namespace {

Mat3 symmetrized(const Mat3& a) {
  Mat3 s = a.triangularView<Eigen::Upper>();
  s.triangularView<Eigen::StrictlyLower>() = a.triangularView<Eigen::StrictlyUpper>().transpose();
  return s;
}

// Unit vector spanning the null space of (A - lambda I), taken from the
// largest cross product of two of its rows.
Vec3 null_vector(const Mat3& a, double lambda) {
  const Mat3 m = a - lambda * Mat3::Identity();
  const Vec3 c01 = m.row(0).transpose().cross(m.row(1).transpose());
  const Vec3 c02 = m.row(0).transpose().cross(m.row(2).transpose());
  const Vec3 c12 = m.row(1).transpose().cross(m.row(2).transpose());
  const double n01 = c01.squaredNorm();
  const double n02 = c02.squaredNorm();
  const double n12 = c12.squaredNorm();
  const double best = std::max({n01, n02, n12});
  if (!(best > 1e-300)) return Vec3::Zero();
  if (n01 == best) return c01 / std::sqrt(n01);
  if (n02 == best) return c02 / std::sqrt(n02);
  return c12 / std::sqrt(n12);
}

// Completes `first` with a second unit vector orthogonal to it; falls back to
// an arbitrary orthogonal direction when the candidate is degenerate.
Vec3 orthogonal_completion(const Vec3& first, const Vec3& candidate) {
  const Vec3 v = candidate - candidate.dot(first) * first;
  const double n = v.norm();
  if (n < 1e-8) return first.unitOrthogonal();
  return v / n;
}

}  // namespace

std::array<double, 3> symmetric_eigenvalues(const Mat3& input) {
  const Mat3 a = symmetrized(input);
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = a.trace() / 3.0;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);

  if (p1 <= 1e-30 * scale * scale) {
    std::array<double, 3> d{a(0, 0), a(1, 1), a(2, 2)};
    std::sort(d.begin(), d.end());
    return d;
  }

  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const Mat3 b = (a - q * Mat3::Identity()) / p;
  const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;

  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double mid = 3.0 * q - hi - lo;
  return {lo, mid, hi};
}

SymmetricEigen3 symmetric_eigen(const Mat3& input) {
  const Mat3 a = symmetrized(input);
  SymmetricEigen3 out;
  out.values = symmetric_eigenvalues(a);
  const auto& ev = out.values;

  if (ev[2] - ev[0] <= 1e-15 * std::max(std::abs(ev[2]), 1.0)) {
    out.vectors = Mat3::Identity();
    return out;
  }

  // Start from the extreme eigenvalue with the wider gap; it is the better
  // conditioned of the two.
  Vec3 v_lo;
  Vec3 v_hi;
  if (ev[2] - ev[1] >= ev[1] - ev[0]) {
    v_hi = null_vector(a, ev[2]);
    v_lo = orthogonal_completion(v_hi, null_vector(a, ev[0]));
  } else {
    v_lo = null_vector(a, ev[0]);
    v_hi = orthogonal_completion(v_lo, null_vector(a, ev[2]));
  }
  const Vec3 v_mid = v_hi.cross(v_lo);
  out.vectors.col(0) = v_lo;
  out.vectors.col(1) = v_mid;
  out.vectors.col(2) = v_hi;
  return out;
}

}  // namespace so3obs
