#include "so3obs/sensors.hpp"

#include <cmath>
#include <sstream>

#include "so3obs/symmetric_eigen.hpp"

namespace so3obs {

NoiseSource::NoiseSource(NoiseSpec spec) : spec_(spec), rng_(spec.seed) {
  if (spec.sigma_dir < 0.0 || spec.sigma_gyro < 0.0) {
    throw Error(ErrorKind::InvalidParams, "noise sigmas must be non-negative");
  }
}

Vec3 NoiseSource::gaussian(double sigma) {
  Vec3 v;
  for (int k = 0; k < 3; ++k) v(k) = sigma * normal_(rng_);
  return v;
}

Vec3 NoiseSource::direction_perturbation() {
  if (spec_.sigma_dir <= 0.0) return Vec3::Zero();
  return gaussian(spec_.sigma_dir);
}

Vec3 NoiseSource::gyro_perturbation() {
  if (spec_.sigma_gyro <= 0.0) return Vec3::Zero();
  return gaussian(spec_.sigma_gyro);
}

std::vector<Vec3> measure_vectors(const TruthState& truth, const ReferenceModel& model,
                                  NoiseSource* noise) {
  std::vector<Vec3> out;
  out.reserve(model.size());
  const Mat3 rt = truth.R.matrix().transpose();
  for (const auto& d : model.directions()) {
    Vec3 v = rt * d.direction;
    if (noise != nullptr && noise->spec().sigma_dir > 0.0) {
      v = exp_hat(noise->direction_perturbation()) * v;
      v.normalize();
    }
    out.push_back(v);
  }
  return out;
}

Vec3 measure_gyro(const TruthState& truth, NoiseSource* noise) {
  Vec3 y = truth.omega + truth.gamma;
  if (noise != nullptr) y += noise->gyro_perturbation();
  return y;
}

Rotation reconstruct_B(const std::vector<Vec3>& v_body, const ReferenceModel& model) {
  if (v_body.size() != model.size()) {
    std::ostringstream os;
    os << "expected " << model.size() << " body directions, got " << v_body.size();
    throw Error(ErrorKind::InvalidParams, os.str());
  }
  const auto& c = model.recon();
  Vec3 raw1 = Vec3::Zero();
  Vec3 raw2 = Vec3::Zero();
  for (std::size_t i = 0; i < v_body.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    raw1 += c(0, col) * v_body[i];
    raw2 += c(1, col) * v_body[i];
  }
  const double n1 = raw1.norm();
  const double n2 = raw2.norm();
  if (n1 < 1e-12 || n2 < 1e-12) {
    throw Error(ErrorKind::Degenerate, "reconstructed basis vector vanished");
  }
  const double sin_angle = raw1.cross(raw2).norm() / (n1 * n2);
  if (sin_angle < std::sin(1e-3)) {
    throw Error(ErrorKind::Degenerate, "reconstructed b1 and b2 are near-collinear");
  }
  const Vec3 b1 = raw1 / n1;
  const Vec3 b2 = (raw2 - raw2.dot(b1) * b1).normalized();
  Mat3 b;
  b.col(0) = b1;
  b.col(1) = b2;
  b.col(2) = b1.cross(b2);
  return Rotation::from_matrix(b, 1e-12);
}

MeasurementFrame synthesize_frame(const TruthState& truth, const ReferenceModel& model,
                                  NoiseSource* noise) {
  MeasurementFrame f;
  f.t = truth.t;
  f.v_body = measure_vectors(truth, model, noise);
  f.omega_y = measure_gyro(truth, noise);
  f.B = reconstruct_B(f.v_body, model);
  return f;
}

KbDecomposition decompose_KB(const std::vector<Vec3>& v_body, const ReferenceModel& model,
                             const Rotation& B_ref) {
  if (v_body.size() != model.size()) {
    throw Error(ErrorKind::InvalidParams, "body direction count does not match the model");
  }
  KbDecomposition out;
  out.K_B = Mat3::Zero();
  for (std::size_t i = 0; i < v_body.size(); ++i) {
    out.K_B += model.directions()[i].weight * v_body[i] * v_body[i].transpose();
  }
  const SymmetricEigen3 eig = symmetric_eigen(out.K_B);
  const auto& ev = eig.values;
  const double gap = model.options().gap_tolerance * ev[2];
  if (ev[1] - ev[0] < gap || ev[2] - ev[1] < gap) {
    throw Error(ErrorKind::DegenerateSpectrum, "K_B has repeated eigenvalues");
  }
  for (int j = 0; j < 3; ++j) {
    int best = 0;
    for (int k = 1; k < 3; ++k) {
      if (std::abs(ev[static_cast<std::size_t>(k)] - model.lambda(j)) <
          std::abs(ev[static_cast<std::size_t>(best)] - model.lambda(j))) {
        best = k;
      }
    }
    Vec3 v = eig.vectors.col(best);
    if (v.dot(B_ref.col(j)) < 0.0) v = -v;
    out.basis.col(j) = v;
    out.lambdas[static_cast<std::size_t>(j)] = ev[static_cast<std::size_t>(best)];
  }
  const Vec3 lam(model.lambda(0), model.lambda(1), model.lambda(2));
  out.residual = (out.K_B - B_ref.matrix() * lam.asDiagonal() * B_ref.matrix().transpose()).norm();
  return out;
}

}  // namespace so3obs
