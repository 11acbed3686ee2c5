#pragma once

#include <array>
#include <string>
#include <vector>

#include "so3obs/complementary.hpp"
#include "so3obs/reference_model.hpp"
#include "so3obs/sensors.hpp"
#include "so3obs/so3.hpp"

namespace so3obs {

/// Mode I is nominal. Mode II swaps the second nominal error function for an
/// expelling one, and mode III does the same for the first.
enum class Mode { I = 1, II = 2, III = 3 };

inline constexpr std::array<Mode, 3> kModes{Mode::I, Mode::II, Mode::III};

inline int mode_index(Mode m) { return static_cast<int>(m); }
const char* to_string(Mode m);

struct HybridParams {
  double alpha = 1.9;
  double beta = 0.899;
  double delta = 0.0;  // hysteresis gap
  Gains gains;

  /// Checks 1 < alpha < 2, |beta| < alpha - 1,
  /// 0 < delta < min(lambda_1, lambda_2) min(2 - alpha, alpha - |beta| - 1)
  /// and the gains. Throws Error{InvalidParams} naming the violated bound.
  void validate(const ReferenceModel& model) const;

  /// delta set to half of its admissible upper bound.
  static HybridParams with_default_delta(const ReferenceModel& model, double alpha, double beta,
                                         Gains gains);
};

struct HybridState {
  Mat3 R_bar = Mat3::Identity();
  Vec3 gamma_bar = Vec3::Zero();
  Mode mode = Mode::I;

  ObserverState continuous() const { return {R_bar, gamma_bar}; }
};

namespace hybrid {

/// Psi_N_i = 1 - b_bar_i^T b_i, i in 1..3.
double psi_nominal(int i, const Rotation& B, const Mat3& R_bar, const ReferenceModel& model);

/// Psi_E_i = alpha + beta b_bar_i^T b_3, i in 1..2.
double psi_expel(int i, const Rotation& B, const Mat3& R_bar, const ReferenceModel& model,
                 const HybridParams& params);

double psi_mode(Mode m, const Rotation& B, const Mat3& R_bar, const ReferenceModel& model,
                const HybridParams& params);

/// Psi for modes I, II, III in that order.
std::array<double, 3> psi_all(const Rotation& B, const Mat3& R_bar, const ReferenceModel& model,
                              const HybridParams& params);

double rho(const Rotation& B, const Mat3& R_bar, const ReferenceModel& model,
           const HybridParams& params);

/// argmin over modes; ties go to the lowest mode.
Mode best_mode(const Rotation& B, const Mat3& R_bar, const ReferenceModel& model,
               const HybridParams& params);

/// Psi_mode - rho >= delta
bool jump_needed(const HybridState& state, const Rotation& B, const ReferenceModel& model,
                 const HybridParams& params);

/// Switches to the minimizing mode. Throws Error{NotInJumpSet} when the state
/// is in the flow set.
HybridState apply_jump(const HybridState& state, const Rotation& B, const ReferenceModel& model,
                       const HybridParams& params);

struct JumpEvent {
  Mode from;
  Mode to;
  double psi_before;
  double psi_after;
};

/// Applies jumps until the state is in the flow set. Returns the jumps taken
/// (at most two: rho is unchanged by a jump and the new mode attains it).
std::vector<JumpEvent> resolve_jumps(HybridState& state, const Rotation& B,
                                     const ReferenceModel& model, const HybridParams& params);

/// e_H = sum_i lambda_i e_H_i for the given mode.
Vec3 innovation_eH(Mode m, const Rotation& B, const Mat3& R_bar, const ReferenceModel& model,
                   const HybridParams& params);

/// omega_bar = (Omega_y - gamma_bar) + k_R e_H, gamma_bar' = -k_I e_H, with
/// the basis B taken from the frame.
FlowRates flow(const HybridState& state, const MeasurementFrame& frame,
               const ReferenceModel& model, const HybridParams& params);

/// min(lambda_1, lambda_2) min(2 - alpha, alpha - |beta| - 1). Throws
/// Error{InvalidParams} if alpha or beta are out of range.
double delta_upper_bound(const ReferenceModel& model, double alpha, double beta);

/// Psi_mode + ||gamma - gamma_bar||^2 / (2 k_I)
double lyapunov(const HybridState& state, const Rotation& B, const ReferenceModel& model,
                const HybridParams& params, const Vec3& true_gamma);

/// One tabulated critical configuration. `columns` gives b_bar as signed
/// 1-based column indices of B, e.g. {1, -3, 2} is (b1, -b3, b2).
struct CriticalPoint {
  Mode mode;
  std::string label;
  std::array<int, 3> columns;
  bool desired;
  Rotation R_bar;
};

/// The twelve tabulated critical configurations (one desired, eleven
/// undesired) relative to the truth attitude, with R_bar^T u_i equal to the
/// tabulated b_bar_i exactly.
std::vector<CriticalPoint> critical_points(const ReferenceModel& model, const Rotation& truth_R);

}  // namespace hybrid
}  // namespace so3obs
