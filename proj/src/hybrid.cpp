#include "so3obs/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace so3obs {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::I: return "I";
    case Mode::II: return "II";
    case Mode::III: return "III";
  }
  return "?";
}

void HybridParams::validate(const ReferenceModel& model) const {
  gains.validate();
  const double bound = hybrid::delta_upper_bound(model, alpha, beta);
  if (!(delta > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "hysteresis gap delta must be positive");
  }
  if (!(delta < bound)) {
    std::ostringstream os;
    os << "delta = " << delta << " violates delta < min(lambda1, lambda2) * min(2 - alpha, alpha - |beta| - 1) = "
       << bound;
    throw Error(ErrorKind::InvalidParams, os.str());
  }
}

HybridParams HybridParams::with_default_delta(const ReferenceModel& model, double alpha,
                                              double beta, Gains gains) {
  HybridParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gains = gains;
  p.delta = 0.5 * hybrid::delta_upper_bound(model, alpha, beta);
  return p;
}

namespace hybrid {

namespace {

Vec3 b_bar(int col, const Mat3& R_bar, const ReferenceModel& model) {
  return R_bar.transpose() * model.u(col);
}

}  // namespace

double psi_nominal(int i, const Rotation& B, const Mat3& R_bar, const ReferenceModel& model) {
  if (i < 1 || i > 3) throw Error(ErrorKind::InvalidParams, "nominal error index must be 1..3");
  return 1.0 - b_bar(i - 1, R_bar, model).dot(B.col(i - 1));
}

double psi_expel(int i, const Rotation& B, const Mat3& R_bar, const ReferenceModel& model,
                 const HybridParams& params) {
  if (i < 1 || i > 2) throw Error(ErrorKind::InvalidParams, "expelling error index must be 1..2");
  return params.alpha + params.beta * b_bar(i - 1, R_bar, model).dot(B.col(2));
}

double psi_mode(Mode m, const Rotation& B, const Mat3& R_bar, const ReferenceModel& model,
                const HybridParams& params) {
  const double first = m == Mode::III ? psi_expel(1, B, R_bar, model, params)
                                      : psi_nominal(1, B, R_bar, model);
  const double second = m == Mode::II ? psi_expel(2, B, R_bar, model, params)
                                      : psi_nominal(2, B, R_bar, model);
  const double third = psi_nominal(3, B, R_bar, model);
  return model.lambda(0) * first + model.lambda(1) * second + model.lambda(2) * third;
}

std::array<double, 3> psi_all(const Rotation& B, const Mat3& R_bar, const ReferenceModel& model,
                              const HybridParams& params) {
  return {psi_mode(Mode::I, B, R_bar, model, params), psi_mode(Mode::II, B, R_bar, model, params),
          psi_mode(Mode::III, B, R_bar, model, params)};
}

double rho(const Rotation& B, const Mat3& R_bar, const ReferenceModel& model,
           const HybridParams& params) {
  const auto p = psi_all(B, R_bar, model, params);
  return *std::min_element(p.begin(), p.end());
}

Mode best_mode(const Rotation& B, const Mat3& R_bar, const ReferenceModel& model,
               const HybridParams& params) {
  const auto p = psi_all(B, R_bar, model, params);
  // min_element returns the first minimum, which is the lowest mode on ties.
  const auto idx = std::distance(p.begin(), std::min_element(p.begin(), p.end()));
  return kModes[static_cast<std::size_t>(idx)];
}

bool jump_needed(const HybridState& state, const Rotation& B, const ReferenceModel& model,
                 const HybridParams& params) {
  const auto p = psi_all(B, state.R_bar, model, params);
  const double current = p[static_cast<std::size_t>(mode_index(state.mode) - 1)];
  return current - *std::min_element(p.begin(), p.end()) >= params.delta;
}

HybridState apply_jump(const HybridState& state, const Rotation& B, const ReferenceModel& model,
                       const HybridParams& params) {
  if (!jump_needed(state, B, model, params)) {
    throw Error(ErrorKind::NotInJumpSet, "state lies in the flow set");
  }
  HybridState next = state;
  next.mode = best_mode(B, state.R_bar, model, params);
  return next;
}

std::vector<JumpEvent> resolve_jumps(HybridState& state, const Rotation& B,
                                     const ReferenceModel& model, const HybridParams& params) {
  std::vector<JumpEvent> events;
  while (jump_needed(state, B, model, params) && events.size() < 2) {
    const double before = psi_mode(state.mode, B, state.R_bar, model, params);
    const Mode from = state.mode;
    state = apply_jump(state, B, model, params);
    events.push_back({from, state.mode, before, psi_mode(state.mode, B, state.R_bar, model, params)});
  }
  return events;
}

Vec3 innovation_eH(Mode m, const Rotation& B, const Mat3& R_bar, const ReferenceModel& model,
                   const HybridParams& params) {
  const Vec3 bb1 = b_bar(0, R_bar, model);
  const Vec3 bb2 = b_bar(1, R_bar, model);
  const Vec3 bb3 = b_bar(2, R_bar, model);
  const Vec3 b1 = B.col(0);
  const Vec3 b2 = B.col(1);
  const Vec3 b3 = B.col(2);

  const Vec3 e1 = m == Mode::III ? Vec3(-params.beta * b3.cross(bb1)) : Vec3(b1.cross(bb1));
  const Vec3 e2 = m == Mode::II ? Vec3(-params.beta * b3.cross(bb2)) : Vec3(b2.cross(bb2));
  const Vec3 e3 = b3.cross(bb3);
  return model.lambda(0) * e1 + model.lambda(1) * e2 + model.lambda(2) * e3;
}

FlowRates flow(const HybridState& state, const MeasurementFrame& frame,
               const ReferenceModel& model, const HybridParams& params) {
  FlowRates r;
  r.innovation = innovation_eH(state.mode, frame.B, state.R_bar, model, params);
  r.omega_bar = (frame.omega_y - state.gamma_bar) + params.gains.k_R * r.innovation;
  r.gamma_bar_dot = -params.gains.k_I * r.innovation;
  return r;
}

double delta_upper_bound(const ReferenceModel& model, double alpha, double beta) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " violates 1 < alpha < 2";
    throw Error(ErrorKind::InvalidParams, os.str());
  }
  if (!(std::abs(beta) < alpha - 1.0)) {
    std::ostringstream os;
    os << "beta = " << beta << " violates |beta| < alpha - 1 = " << alpha - 1.0;
    throw Error(ErrorKind::InvalidParams, os.str());
  }
  return std::min(model.lambda(0), model.lambda(1)) *
         std::min(2.0 - alpha, alpha - std::abs(beta) - 1.0);
}

double lyapunov(const HybridState& state, const Rotation& B, const ReferenceModel& model,
                const HybridParams& params, const Vec3& true_gamma) {
  const Vec3 err = true_gamma - state.gamma_bar;
  return psi_mode(state.mode, B, state.R_bar, model, params) +
         err.squaredNorm() / (2.0 * params.gains.k_I);
}

std::vector<CriticalPoint> critical_points(const ReferenceModel& model, const Rotation& truth_R) {
  struct Row {
    Mode mode;
    const char* label;
    std::array<int, 3> cols;
  };
  static constexpr std::array<Row, 12> kTable{{
      {Mode::I, "I desired", {1, 2, 3}},
      {Mode::I, "I undesired 1", {-1, 2, -3}},
      {Mode::I, "I undesired 2", {1, -2, -3}},
      {Mode::I, "I undesired 3", {-1, -2, 3}},
      {Mode::II, "II undesired 1", {1, -3, 2}},
      {Mode::II, "II undesired 2", {-1, -3, -2}},
      {Mode::II, "II undesired 3", {1, 3, -2}},
      {Mode::II, "II undesired 4", {-1, 3, 2}},
      {Mode::III, "III undesired 1", {-3, 2, 1}},
      {Mode::III, "III undesired 2", {-3, -2, -1}},
      {Mode::III, "III undesired 3", {3, 2, -1}},
      {Mode::III, "III undesired 4", {3, -2, 1}},
  }};

  // B_bar = B P with P a signed permutation, and B_bar = R_bar^T U gives
  // R_bar = U P^T U^T R.
  const Mat3& u = model.U().matrix();
  std::vector<CriticalPoint> out;
  out.reserve(kTable.size());
  for (const auto& row : kTable) {
    Mat3 p = Mat3::Zero();
    for (int j = 0; j < 3; ++j) {
      const int c = row.cols[static_cast<std::size_t>(j)];
      p(std::abs(c) - 1, j) = c > 0 ? 1.0 : -1.0;
    }
    const Mat3 r_bar = u * p.transpose() * u.transpose() * truth_R.matrix();
    out.push_back({row.mode, row.label, row.cols, row.cols == std::array<int, 3>{1, 2, 3},
                   Rotation::from_matrix(r_bar)});
  }
  return out;
}

}  // namespace hybrid
}  // namespace so3obs
