#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "so3obs/hybrid.hpp"
#include "so3obs/reference_model.hpp"
#include "so3obs/scenario.hpp"

namespace so3obs::verify {

// Random draws shared by the property checks.
Rotation random_rotation(std::mt19937_64& rng);
Vec3 random_vec3(std::mt19937_64& rng, double scale = 1.0);
Mat3 random_mat3(std::mt19937_64& rng, double scale = 1.0);

/// Truncated power series of the matrix exponential of hat(v); independent
/// of the closed form.
Mat3 exp_series(const Vec3& v, int terms = 40);

struct CriticalPointReport {
  hybrid::CriticalPoint point;
  std::array<double, 3> psi;  // modes I, II, III
  double rho;
  double margin;    // Psi_mode - rho
  double eh_norm;   // ||e_H|| in the point's own mode
  bool in_jump_set;
};

std::vector<CriticalPointReport> evaluate_critical_points(const ReferenceModel& model,
                                                          const HybridParams& params,
                                                          const Rotation& truth_R);

struct RefinedCriticalPoint {
  Rotation R_bar;
  double eh_norm;
  double moved_angle;  // rad, from the seed
  double margin;
  bool in_jump_set;
};

/// Newton iteration on e_H(R_bar) = 0 in the given mode, started at `seed`,
/// with a central-difference Jacobian in body-frame coordinates
/// (R_bar exp(xi^)).
RefinedCriticalPoint refine_critical_point(Mode mode, const Rotation& B, const Rotation& seed,
                                           const ReferenceModel& model,
                                           const HybridParams& params);

struct FlowSample {
  Rotation R;
  Rotation R_bar;
  Vec3 omega;
  Vec3 gamma;
  Vec3 gamma_bar;
};

/// d/dt Psi_m along the hybrid flow by a five-point central difference with
/// the truth rotating at constant body rate and the estimate at omega_bar.
double psi_rate_fd(Mode mode, const FlowSample& s, const ReferenceModel& model,
                   const HybridParams& params, double eps = 1e-3);

/// -gamma_tilde^T e_H - k_R ||e_H||^2
double psi_rate_analytic(Mode mode, const FlowSample& s, const ReferenceModel& model,
                         const HybridParams& params);

/// Observed convergence orders of the cg2 integrator for the complementary
/// observer over `duration` seconds, one per consecutive pair of steps,
/// measured against a run at steps.back() / 64.
std::vector<double> observed_cg2_orders(const Scenario& base, const std::vector<double>& steps,
                                        double duration);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20150701;
  int samples = 1000;
  std::optional<double> delta;  // overrides the default hysteresis gap, unchecked
  std::function<Rotation(const Vec3&)> exp_map = exp_hat;
};

/// Full property battery over the standard reference configuration.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

}  // namespace so3obs::verify
