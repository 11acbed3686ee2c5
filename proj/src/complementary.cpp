#include "so3obs/complementary.hpp"

namespace so3obs {

void Gains::validate() const {
  if (!(k_R > 0.0)) throw Error(ErrorKind::InvalidParams, "k_R must be positive");
  if (!(k_I > 0.0)) throw Error(ErrorKind::InvalidParams, "k_I must be positive");
}

double attitude_error(const Mat3& R_bar, const Rotation& B, const ReferenceModel& model) {
  double psi = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec3 b_bar = R_bar.transpose() * model.u(i);
    psi += model.lambda(i) * (1.0 - b_bar.dot(B.col(i)));
  }
  return psi;
}

double attitude_error_weighted(const Mat3& R_bar, const MeasurementFrame& frame,
                               const ReferenceModel& model) {
  double psi = 0.0;
  const auto& dirs = model.directions();
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Vec3 v_e = R_bar.transpose() * dirs[i].direction;
    psi += dirs[i].weight * (1.0 - v_e.dot(frame.v_body[i]));
  }
  return psi;
}

namespace complementary {

Vec3 innovation_eR(const Mat3& R_bar, const MeasurementFrame& frame, const ReferenceModel& model) {
  Vec3 e = Vec3::Zero();
  const auto& dirs = model.directions();
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Vec3 v_e = R_bar.transpose() * dirs[i].direction;
    e += dirs[i].weight * frame.v_body[i].cross(v_e);
  }
  return e;
}

FlowRates flow(const ObserverState& state, const MeasurementFrame& frame,
               const ReferenceModel& model, const Gains& gains) {
  FlowRates r;
  r.innovation = innovation_eR(state.R_bar, frame, model);
  r.omega_bar = (frame.omega_y - state.gamma_bar) + gains.k_R * r.innovation;
  r.gamma_bar_dot = -gains.k_I * r.innovation;
  return r;
}

std::array<Rotation, 4> equilibria(const ReferenceModel& model, const Rotation& truth_R) {
  const Mat3& u = model.U().matrix();
  std::array<Rotation, 4> out;
  out[0] = truth_R;
  for (int i = 0; i < 3; ++i) {
    Vec3 d = -Vec3::Ones();
    d(i) = 1.0;
    const Mat3 flip = u * d.asDiagonal() * u.transpose();
    out[static_cast<std::size_t>(i + 1)] = Rotation::from_matrix(flip * truth_R.matrix());
  }
  return out;
}

double lyapunov(const ObserverState& state, const Rotation& B, const ReferenceModel& model,
                const Gains& gains, const Vec3& true_gamma) {
  const Vec3 err = true_gamma - state.gamma_bar;
  return attitude_error(state.R_bar, B, model) + err.squaredNorm() / (2.0 * gains.k_I);
}

}  // namespace complementary
}  // namespace so3obs
