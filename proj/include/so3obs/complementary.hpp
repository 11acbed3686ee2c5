#pragma once

#include <array>

#include "so3obs/reference_model.hpp"
#include "so3obs/sensors.hpp"
#include "so3obs/so3.hpp"

namespace so3obs {

struct Gains {
  double k_R = 1.0;
  double k_I = 0.25;

  /// Throws Error{InvalidParams} unless both gains are positive.
  void validate() const;
};

/// Continuous observer state. The attitude estimate is stored as a plain
/// matrix so the non-geometric baseline integrator can share the type; the
/// geometric integrator keeps it on SO(3).
struct ObserverState {
  Mat3 R_bar = Mat3::Identity();
  Vec3 gamma_bar = Vec3::Zero();
};

/// Right-hand side of R_bar' = R_bar hat(omega_bar), gamma_bar' = gamma_bar_dot.
struct FlowRates {
  Vec3 omega_bar = Vec3::Zero();
  Vec3 gamma_bar_dot = Vec3::Zero();
  Vec3 innovation = Vec3::Zero();
};

/// Attitude error sum_i lambda_i (1 - b_bar_i^T b_i) with b_bar_i = R_bar^T u_i.
double attitude_error(const Mat3& R_bar, const Rotation& B, const ReferenceModel& model);

/// The same quantity from raw directions: sum_i k_i (1 - (R_bar^T v_i^I)^T v_i^B).
double attitude_error_weighted(const Mat3& R_bar, const MeasurementFrame& frame,
                               const ReferenceModel& model);

namespace complementary {

/// e_R = sum_i k_i v_i^B x (R_bar^T v_i^I)
Vec3 innovation_eR(const Mat3& R_bar, const MeasurementFrame& frame, const ReferenceModel& model);

/// omega_bar = (Omega_y - gamma_bar) + k_R e_R, gamma_bar' = -k_I e_R
FlowRates flow(const ObserverState& state, const MeasurementFrame& frame,
               const ReferenceModel& model, const Gains& gains);

/// {R, U D_1 U^T R, U D_2 U^T R, U D_3 U^T R}
std::array<Rotation, 4> equilibria(const ReferenceModel& model, const Rotation& truth_R);

/// Psi + ||gamma - gamma_bar||^2 / (2 k_I)
double lyapunov(const ObserverState& state, const Rotation& B, const ReferenceModel& model,
                const Gains& gains, const Vec3& true_gamma);

}  // namespace complementary
}  // namespace so3obs
