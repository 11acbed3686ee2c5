#pragma once

#include <array>
#include <vector>

#include "so3obs/so3.hpp"

namespace so3obs {

struct ReferenceDirection {
  Vec3 direction;  // unit, inertial frame
  double weight;   // k_i > 0

  /// Normalizes `raw` and validates the weight. Throws Error{InvalidParams}.
  static ReferenceDirection from_raw(const Vec3& raw, double weight);
};

/// How the eigenpairs of K are ordered and signed before forming U.
///
/// Descending: lambda_1 > lambda_2 > lambda_3; every eigenvector is flipped so
/// its largest-magnitude component is positive, then u_3 is negated if that
/// leaves det(U) = -1.
///
/// Ascending: lambda_1 < lambda_2 < lambda_3 as returned by LAPACK-style
/// solvers; every eigenvector is flipped so its last nonzero component is
/// positive, and if that leaves det(U) = -1 all three are negated. This is the
/// ordering the shipped scenarios use.
enum class EigenOrder { Descending, Ascending };

struct ModelOptions {
  EigenOrder order = EigenOrder::Descending;
  double gap_tolerance = 1e-6;  // relative to the largest eigenvalue
};

/// Weighted reference matrix K = sum k_i v_i v_i^T with its eigenbasis
/// K = U diag(lambda) U^T, U in SO(3), and the reconstruction coefficients C
/// with u_j = sum_i C(j, i) v_i.
class ReferenceModel {
 public:
  /// Throws Error{RankDeficient} when the directions do not span R^3 and
  /// Error{DegenerateSpectrum} when two eigenvalues are closer than the gap
  /// tolerance.
  static ReferenceModel build(std::vector<ReferenceDirection> dirs, ModelOptions options = {});

  const std::vector<ReferenceDirection>& directions() const { return dirs_; }
  std::size_t size() const { return dirs_.size(); }
  const Mat3& K() const { return K_; }
  const Rotation& U() const { return U_; }
  Vec3 u(int j) const { return U_.col(j); }
  const std::array<double, 3>& lambdas() const { return lambdas_; }
  double lambda(int j) const { return lambdas_[static_cast<std::size_t>(j)]; }
  const Eigen::Matrix<double, 3, Eigen::Dynamic>& recon() const { return recon_; }
  const ModelOptions& options() const { return options_; }

  double weight_sum() const;

  /// Same directions and weights with eigenvector columns i and j negated
  /// (det(U) is preserved). Used to probe sign-convention dependence.
  ReferenceModel with_flipped_columns(int i, int j) const;

 private:
  ReferenceModel() = default;
  void compute_recon();

  std::vector<ReferenceDirection> dirs_;
  ModelOptions options_;
  Mat3 K_ = Mat3::Zero();
  Rotation U_;
  std::array<double, 3> lambdas_{};
  Eigen::Matrix<double, 3, Eigen::Dynamic> recon_;
};

/// |sum k_i - sum lambda_i|
double trace_identity_check(const ReferenceModel& model);

/// Directions (-2,5,2), (10,-1,0), (0,1,-2), normalized, with weights
/// 1.211, 1.21, 1.209. This is the configuration of the shipped scenarios.
std::vector<ReferenceDirection> standard_directions();

}  // namespace so3obs
