#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "so3obs/complementary.hpp"
#include "so3obs/hybrid.hpp"
#include "so3obs/reference_model.hpp"
#include "so3obs/sensors.hpp"

namespace so3obs {

enum class ObserverKind { Complementary, Hybrid };
enum class IntegratorKind { Cg2, NaiveRk4 };

const char* to_string(ObserverKind k);
const char* to_string(IntegratorKind k);

struct Scenario {
  std::string name = "unnamed";
  double duration = 60.0;  // s
  double h = 0.05;         // s
  std::vector<Vec3> directions;  // inertial, normalized at model build
  std::vector<double> weights;
  EigenOrder eigen_order = EigenOrder::Descending;
  Gains gains;
  double alpha = 1.9;
  double beta = 0.899;
  std::optional<double> delta;  // default: half of the admissible bound
  Vec3 gamma = Vec3::Zero();    // true gyro bias, rad/s
  Mat3 R_bar0 = Mat3::Identity();  // projected onto SO(3) at start
  Vec3 gamma_bar0 = Vec3::Zero();
  Mode initial_mode = Mode::I;
  NoiseSpec noise;
  ObserverKind observer = ObserverKind::Hybrid;
  IntegratorKind integrator = IntegratorKind::Cg2;

  std::size_t step_count() const;

  /// Structural checks (positive duration and step, matching weights).
  /// Throws Error{InvalidScenario}. Hybrid parameter bounds are checked when
  /// the run builds its parameters and raise Error{InvalidParams}.
  void validate() const;
};

/// Flat `key = value` text, `#` comments, bracketed lists for vectors and
/// matrices. See scenarios/README.md for the keys and units.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Ground-truth maneuver R = euler321(sin(t/2), 2 sin t, cos 2t - 3) with
/// its exact body rate and the given constant bias.
TruthState truth_state(double t, const Vec3& gamma = Vec3::Zero());

struct TimeSeriesRecord {
  double t = 0.0;
  double att_err = 0.0;  // ||R_bar - R||_2
  int mode = 1;
  double e_h_norm = 0.0;
  Vec3 gamma_err = Vec3::Zero();  // gamma - gamma_bar
  double psi = 0.0;
  double lyapunov = 0.0;
  double ortho_defect = 0.0;
  bool jump_flag = false;
};

struct JumpRecord {
  double t;
  Mode from;
  Mode to;
  double lyapunov_before;
  double lyapunov_after;
};

struct RunResult {
  ObserverKind observer;
  IntegratorKind integrator;
  std::vector<TimeSeriesRecord> records;
  std::vector<JumpRecord> jumps;
  double delta = 0.0;
  bool delta_defaulted = false;
  double projection_residual = 0.0;  // ||project(R_bar0) - R_bar0||_F
  ObserverState final_state;

  /// Times at which the mode left its previous value.
  std::vector<double> switch_times() const;
};

ReferenceModel build_model(const Scenario& scn);

/// Hybrid parameters of the scenario; delta defaults to half the bound.
HybridParams hybrid_params(const Scenario& scn, const ReferenceModel& model);

/// Frames at t_n = n h for n = 0..N, drawn from one noise stream.
std::vector<MeasurementFrame> measurement_stream(const Scenario& scn, const ReferenceModel& model);

RunResult run(const Scenario& scn);

/// Runs against a precomputed measurement stream so paired runs see the same
/// measurements.
RunResult run(const Scenario& scn, const ReferenceModel& model,
              const std::vector<MeasurementFrame>& stream);

struct RunPair {
  RunResult first;
  RunResult second;
};

/// Hybrid (first) and complementary (second) observers on one shared stream.
RunPair compare_observers(const Scenario& scn);

/// cg2 (first) and naive RK4 (second) on one shared stream.
RunPair compare_integrators(const Scenario& scn);

}  // namespace so3obs
