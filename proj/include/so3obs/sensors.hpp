#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "so3obs/reference_model.hpp"
#include "so3obs/so3.hpp"

namespace so3obs {

struct TruthState {
  double t = 0.0;
  Rotation R;
  Vec3 omega = Vec3::Zero();  // body frame, rad/s
  Vec3 gamma = Vec3::Zero();  // constant gyro bias, rad/s
};

struct MeasurementFrame {
  double t = 0.0;
  std::vector<Vec3> v_body;   // unit directions in the body frame
  Vec3 omega_y = Vec3::Zero();
  Rotation B;                 // [b1 b2 b3] = R^T U in the noise-free case
};

struct NoiseSpec {
  double sigma_dir = 0.0;   // rad, per-axis tangent perturbation of each direction
  double sigma_gyro = 0.0;  // rad/s
  std::uint64_t seed = 0;

  bool enabled() const { return sigma_dir > 0.0 || sigma_gyro > 0.0; }
};

/// Owns the random stream for one measurement sequence.
class NoiseSource {
 public:
  explicit NoiseSource(NoiseSpec spec);

  const NoiseSpec& spec() const { return spec_; }
  Vec3 direction_perturbation();
  Vec3 gyro_perturbation();

 private:
  Vec3 gaussian(double sigma);

  NoiseSpec spec_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// v_i^B = R^T v_i^I, each optionally rotated by exp_hat of a small random
/// vector and renormalized.
std::vector<Vec3> measure_vectors(const TruthState& truth, const ReferenceModel& model,
                                  NoiseSource* noise = nullptr);

/// Omega_y = Omega + gamma (+ noise).
Vec3 measure_gyro(const TruthState& truth, NoiseSource* noise = nullptr);

/// b_j = sum_i C(j, i) v_B[i], then Gram-Schmidt with b3 = b1 x b2.
/// Throws Error{Degenerate} if b1, b2 are within 1e-3 rad of collinear.
Rotation reconstruct_B(const std::vector<Vec3>& v_body, const ReferenceModel& model);

/// Full frame: directions, gyro and the reconstructed basis.
MeasurementFrame synthesize_frame(const TruthState& truth, const ReferenceModel& model,
                                  NoiseSource* noise = nullptr);

struct KbDecomposition {
  Mat3 K_B;
  std::array<double, 3> lambdas;  // in model column order
  Mat3 basis;                     // eigenvectors, signs matched to B_ref
  double residual;                // ||K_B - B_ref diag(lambda) B_ref^T||_F
};

/// Eigendecomposition route to the body basis, used to cross-check
/// reconstruct_B. Column j is matched to the model eigenvalue lambda_j and its
/// sign to B_ref, which resolves exactly the D_i ambiguity of the
/// decomposition.
KbDecomposition decompose_KB(const std::vector<Vec3>& v_body, const ReferenceModel& model,
                             const Rotation& B_ref);

inline double decompose_KB_check(const std::vector<Vec3>& v_body, const ReferenceModel& model,
                                 const Rotation& B_ref) {
  return decompose_KB(v_body, model, B_ref).residual;
}

}  // namespace so3obs
