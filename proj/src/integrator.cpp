#include "so3obs/integrator.hpp"

namespace so3obs {

ObserverState cg2_step(const ObserverState& state, const ObserverFlow& flow, const StepInput& in) {
  const FlowRates k1 = flow(state, in.frame_n);
  const Vec3 w1 = state.R_bar * k1.omega_bar;

  ObserverState mid;
  mid.R_bar = exp_hat(in.h * w1).matrix() * state.R_bar;
  mid.gamma_bar = state.gamma_bar + in.h * k1.gamma_bar_dot;

  const FlowRates k2 = flow(mid, in.frame_n1);
  const Vec3 w2 = mid.R_bar * k2.omega_bar;

  ObserverState next;
  next.R_bar = exp_hat(0.5 * in.h * (w1 + w2)).matrix() * state.R_bar;
  next.gamma_bar = state.gamma_bar + 0.5 * in.h * (k1.gamma_bar_dot + k2.gamma_bar_dot);
  return next;
}

ObserverState naive_rk4_step(const ObserverState& state, const ObserverFlow& flow,
                             const StepInput& in) {
  struct Deriv {
    Mat3 r;
    Vec3 g;
  };
  auto eval = [&](const ObserverState& s, const MeasurementFrame& f) {
    const FlowRates fr = flow(s, f);
    return Deriv{s.R_bar * hat(fr.omega_bar), fr.gamma_bar_dot};
  };
  auto shifted = [&](const Deriv& d, double scale) {
    return ObserverState{state.R_bar + scale * d.r, state.gamma_bar + scale * d.g};
  };

  const double h = in.h;
  const Deriv d1 = eval(state, in.frame_n);
  const Deriv d2 = eval(shifted(d1, 0.5 * h), in.frame_n);
  const Deriv d3 = eval(shifted(d2, 0.5 * h), in.frame_n);
  const Deriv d4 = eval(shifted(d3, h), in.frame_n1);

  ObserverState next;
  next.R_bar = state.R_bar + (h / 6.0) * (d1.r + 2.0 * d2.r + 2.0 * d3.r + d4.r);
  next.gamma_bar = state.gamma_bar + (h / 6.0) * (d1.g + 2.0 * d2.g + 2.0 * d3.g + d4.g);
  return next;
}

}  // namespace so3obs
