#pragma once

#include <functional>

#include "so3obs/complementary.hpp"
#include "so3obs/sensors.hpp"

namespace so3obs {

/// Observer vector field evaluated at a state and a measurement frame. The
/// hybrid observer binds its mode into the closure, so the mode is frozen
/// for the duration of a step.
using ObserverFlow = std::function<FlowRates(const ObserverState&, const MeasurementFrame&)>;

struct StepInput {
  double h;
  const MeasurementFrame& frame_n;   // measurements at t_n
  const MeasurementFrame& frame_n1;  // measurements at t_n + h
};

/// Two-stage Crouch-Grossman step. Both stages update the attitude by left
/// multiplication with exp of a spatial rate, so R_bar stays on SO(3):
///
///   w1 = R_n omega_bar(R_n, g_n, y_n)
///   R' = exp(h w1^) R_n,            g' = g_n + h g1'
///   w2 = R' omega_bar(R', g', y_n+1)
///   R_n+1 = exp(h/2 (w1 + w2)^) R_n, g_n+1 = g_n + h/2 (g1' + g2')
ObserverState cg2_step(const ObserverState& state, const ObserverFlow& flow, const StepInput& in);

/// Classical RK4 on the nine entries of R_bar with no projection. Stages at
/// t_n and t_n + h/2 use frame_n (zero-order hold), the last stage frame_n1.
ObserverState naive_rk4_step(const ObserverState& state, const ObserverFlow& flow,
                             const StepInput& in);

}  // namespace so3obs
