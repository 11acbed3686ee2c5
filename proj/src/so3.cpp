#include "so3obs/so3.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "so3obs/symmetric_eigen.hpp"

namespace so3obs {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSkew: return "NotSkew";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NotInJumpSet: return "NotInJumpSet";
    case ErrorKind::InvalidScenario: return "InvalidScenario";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Rotation Rotation::from_matrix(const Mat3& m, double tol) {
  if (!m.allFinite()) throw Error(ErrorKind::Degenerate, "rotation has non-finite entries");
  const double defect = orthogonality_defect(m);
  const double det = m.determinant();
  if (defect > tol || std::abs(det - 1.0) > tol) {
    std::ostringstream os;
    os << "matrix is not a rotation (||M^T M - I||_F = " << defect << ", det = " << det << ")";
    throw Error(ErrorKind::Degenerate, os.str());
  }
  return Rotation(m, Unchecked{});
}

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& m, double tol) {
  const double asym = (m + m.transpose()).norm();
  if (asym > tol) {
    std::ostringstream os;
    os << "||M + M^T||_F = " << asym << " exceeds " << tol;
    throw Error(ErrorKind::NotSkew, os.str());
  }
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

Rotation exp_hat(const Vec3& v) {
  const double theta = v.norm();
  const Mat3 h = hat(v);
  if (theta < 1e-8) {
    return Rotation(Mat3::Identity() + h + 0.5 * h * h, Rotation::Unchecked{});
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Rotation(Mat3::Identity() + a * h + b * h * h, Rotation::Unchecked{});
}

Rotation project_rotation(const Mat3& m) {
  if (!m.allFinite()) throw Error(ErrorKind::Degenerate, "matrix has non-finite entries");
  if (m.determinant() <= 0.0) {
    throw Error(ErrorKind::Degenerate, "det(M) <= 0 has no nearest proper rotation");
  }
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() < 1e-6) {
    throw Error(ErrorKind::Degenerate, "matrix is near rank-deficient");
  }
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return Rotation::from_matrix(svd.matrixU() * d * svd.matrixV().transpose());
}

double spectral_norm(const Mat3& m) {
  const auto ev = symmetric_eigenvalues(m.transpose() * m);
  return std::sqrt(std::max(ev[2], 0.0));
}

Rotation euler321(double a, double b, double c) {
  return exp_hat(a * Vec3::UnitZ()) * exp_hat(b * Vec3::UnitY()) * exp_hat(c * Vec3::UnitX());
}

double orthogonality_defect(const Mat3& m) {
  return (m.transpose() * m - Mat3::Identity()).norm();
}

}  // namespace so3obs
