#include "so3obs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace so3obs::verify {

Rotation random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return project_rotation(q.toRotationMatrix());
}

Vec3 random_vec3(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

Mat3 random_mat3(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = u(rng);
  }
  return m;
}

Mat3 exp_series(const Vec3& v, int terms) {
  const Mat3 a = hat(v);
  Mat3 term = Mat3::Identity();
  Mat3 sum = Mat3::Identity();
  for (int k = 1; k < terms; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

std::vector<CriticalPointReport> evaluate_critical_points(const ReferenceModel& model,
                                                          const HybridParams& params,
                                                          const Rotation& truth_R) {
  const Rotation B = truth_R.transpose() * model.U();
  std::vector<CriticalPointReport> out;
  for (const auto& cp : hybrid::critical_points(model, truth_R)) {
    CriticalPointReport r{cp, {}, 0.0, 0.0, 0.0, false};
    r.psi = hybrid::psi_all(B, cp.R_bar.matrix(), model, params);
    r.rho = *std::min_element(r.psi.begin(), r.psi.end());
    r.margin = r.psi[static_cast<std::size_t>(mode_index(cp.mode) - 1)] - r.rho;
    r.eh_norm = hybrid::innovation_eH(cp.mode, B, cp.R_bar.matrix(), model, params).norm();
    r.in_jump_set = r.margin >= params.delta;
    out.push_back(r);
  }
  return out;
}

RefinedCriticalPoint refine_critical_point(Mode mode, const Rotation& B, const Rotation& seed,
                                           const ReferenceModel& model,
                                           const HybridParams& params) {
  auto residual = [&](const Rotation& r) {
    return hybrid::innovation_eH(mode, B, r.matrix(), model, params);
  };
  Rotation r = seed;
  constexpr double eps = 1e-6;
  for (int it = 0; it < 100; ++it) {
    const Vec3 f = residual(r);
    if (f.norm() < 1e-14) break;
    Mat3 jac;
    for (int k = 0; k < 3; ++k) {
      const Vec3 e = Vec3::Unit(k) * eps;
      jac.col(k) = (residual(r * exp_hat(e)) - residual(r * exp_hat(-e))) / (2.0 * eps);
    }
    Vec3 xi = -jac.completeOrthogonalDecomposition().solve(f);
    if (xi.norm() > 0.5) xi *= 0.5 / xi.norm();
    r = r * exp_hat(xi);
  }
  RefinedCriticalPoint out{r, residual(r).norm(), 0.0, 0.0, false};
  const double c = std::clamp(((seed.transpose() * r).matrix().trace() - 1.0) / 2.0, -1.0, 1.0);
  out.moved_angle = std::acos(c);
  const auto psi = hybrid::psi_all(B, r.matrix(), model, params);
  out.margin = psi[static_cast<std::size_t>(mode_index(mode) - 1)] -
               *std::min_element(psi.begin(), psi.end());
  out.in_jump_set = out.margin >= params.delta;
  return out;
}

namespace {

Vec3 flow_rate(Mode mode, const FlowSample& s, const ReferenceModel& model,
               const HybridParams& params) {
  const Rotation B = s.R.transpose() * model.U();
  const Vec3 e_h = hybrid::innovation_eH(mode, B, s.R_bar.matrix(), model, params);
  return s.omega + s.gamma - s.gamma_bar + params.gains.k_R * e_h;
}

}  // namespace

double psi_rate_fd(Mode mode, const FlowSample& s, const ReferenceModel& model,
                   const HybridParams& params, double eps) {
  const Vec3 omega_bar = flow_rate(mode, s, model, params);
  auto psi_at = [&](double t) {
    const Rotation R = s.R * exp_hat(t * s.omega);
    const Rotation B = R.transpose() * model.U();
    const Mat3 r_bar = (s.R_bar * exp_hat(t * omega_bar)).matrix();
    return hybrid::psi_mode(mode, B, r_bar, model, params);
  };
  return (-psi_at(2 * eps) + 8.0 * psi_at(eps) - 8.0 * psi_at(-eps) + psi_at(-2 * eps)) /
         (12.0 * eps);
}

double psi_rate_analytic(Mode mode, const FlowSample& s, const ReferenceModel& model,
                         const HybridParams& params) {
  const Rotation B = s.R.transpose() * model.U();
  const Vec3 e_h = hybrid::innovation_eH(mode, B, s.R_bar.matrix(), model, params);
  const Vec3 gamma_tilde = s.gamma - s.gamma_bar;
  return -gamma_tilde.dot(e_h) - params.gains.k_R * e_h.squaredNorm();
}

std::vector<double> observed_cg2_orders(const Scenario& base, const std::vector<double>& steps,
                                        double duration) {
  auto final_state = [&](double h) {
    Scenario scn = base;
    scn.duration = duration;
    scn.h = h;
    scn.noise = NoiseSpec{};
    scn.observer = ObserverKind::Complementary;
    scn.integrator = IntegratorKind::Cg2;
    return run(scn).final_state;
  };
  const ObserverState ref = final_state(steps.back() / 64.0);
  std::vector<double> errors;
  for (double h : steps) {
    const ObserverState s = final_state(h);
    errors.push_back((s.R_bar - ref.R_bar).norm() + (s.gamma_bar - ref.gamma_bar).norm());
  }
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    orders.push_back(std::log(errors[i] / errors[i + 1]) / std::log(steps[i] / steps[i + 1]));
  }
  return orders;
}

namespace {

/// Tracks the worst deviation of one family of identities.
struct Worst {
  double value = 0.0;
  void update(double v) { value = std::max(value, std::isfinite(v) ? v : INFINITY); }
};

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckResult tolerance_check(std::string name, const Worst& worst, double tol) {
  return {std::move(name), worst.value <= tol,
          "max deviation " + sci(worst.value) + " (tolerance " + sci(tol) + ")"};
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  std::mt19937_64 rng(options.seed);
  const ReferenceModel model = ReferenceModel::build(standard_directions());
  HybridParams params = HybridParams::with_default_delta(model, 1.9, 0.899, Gains{});
  if (options.delta) params.delta = *options.delta;
  constexpr double tol = 1e-10;
  const int n = options.samples;

  {
    Worst cross, conj, bracket, trace, sym, exp_conj, exp_ser;
    for (int k = 0; k < n; ++k) {
      const Vec3 x = random_vec3(rng);
      const Vec3 y = random_vec3(rng);
      const Mat3 a = random_mat3(rng);
      const Rotation r = random_rotation(rng);
      cross.update((hat(x) * y - x.cross(y)).norm());
      conj.update((r.matrix() * hat(x) * r.matrix().transpose() - hat(r * x)).norm());
      bracket.update((hat(x) * hat(y) - hat(y) * hat(x) - hat(x.cross(y))).norm());
      const Mat3 skew = a - a.transpose();
      trace.update(std::abs((a * hat(x)).trace() + x.dot(vee(skew))));
      sym.update((hat(x) * a + a.transpose() * hat(x) - hat((a.trace() * Mat3::Identity() - a) * x))
                     .norm());
      const Vec3 w = random_vec3(rng, 3.0);
      exp_conj.update((r.matrix() * options.exp_map(w).matrix() * r.matrix().transpose() -
                       options.exp_map(r * w).matrix())
                          .norm());
      exp_ser.update((options.exp_map(w).matrix() - exp_series(w)).norm());
    }
    results.push_back(tolerance_check("hat: hat(x) y = x cross y", cross, tol));
    results.push_back(tolerance_check("hat: R hat(x) R^T = hat(R x)", conj, tol));
    results.push_back(tolerance_check("hat: commutator is hat(x cross y)", bracket, tol));
    results.push_back(tolerance_check("hat: tr(A hat(x)) = -x^T vee(A - A^T)", trace, tol));
    results.push_back(
        tolerance_check("hat: hat(x) A + A^T hat(x) = hat((tr(A) I - A) x)", sym, tol));
    results.push_back(tolerance_check("exp: R exp(w) R^T = exp(R w)", exp_conj, tol));
    results.push_back(tolerance_check("exp: closed form matches power series", exp_ser, tol));
  }

  {
    Worst psi_forms, eh_er, er_hat, basis, kb;
    for (int k = 0; k < n; ++k) {
      const Rotation R = random_rotation(rng);
      const Rotation R_bar = random_rotation(rng);
      const TruthState truth{0.0, R, random_vec3(rng), random_vec3(rng, 0.2)};
      const MeasurementFrame frame = synthesize_frame(truth, model);
      const Mat3& rb = R_bar.matrix();
      psi_forms.update(std::abs(attitude_error(rb, frame.B, model) -
                                attitude_error_weighted(rb, frame, model)));
      const Vec3 e_r = complementary::innovation_eR(rb, frame, model);
      eh_er.update((hybrid::innovation_eH(Mode::I, frame.B, rb, model, params) - e_r).norm());
      const Mat3& K = model.K();
      er_hat.update((hat(e_r) - (rb.transpose() * K * R.matrix() - R.matrix().transpose() * K * rb))
                        .norm());
      basis.update((frame.B.matrix() - (R.transpose() * model.U()).matrix()).norm());
      kb.update(decompose_KB_check(frame.v_body, model, frame.B));
    }
    results.push_back(tolerance_check("error: lambda/b form equals k/v form", psi_forms, tol));
    results.push_back(tolerance_check("innovation: mode I e_H equals e_R", eh_er, tol));
    results.push_back(
        tolerance_check("innovation: hat(e_R) = R_bar^T K R - R^T K R_bar", er_hat, tol));
    results.push_back(tolerance_check("basis: reconstruction gives R^T U", basis, tol));
    results.push_back(tolerance_check("basis: K_B = B diag(lambda) B^T", kb, tol));
  }

  {
    const Rotation truth = random_rotation(rng);
    const auto reports = evaluate_critical_points(model, params, truth);
    bool ok = true;
    std::ostringstream detail;
    int in_jump = 0;
    for (const auto& r : reports) {
      if (r.point.desired) {
        const bool good = !r.in_jump_set && std::abs(r.psi[0]) < tol;
        if (!good) detail << r.point.label << " not a flow-set zero; ";
        ok = ok && good;
      } else if (r.in_jump_set) {
        ++in_jump;
      } else {
        ok = false;
        detail << r.point.label << " margin " << sci(r.margin) << " < delta; ";
      }
    }
    detail << in_jump << "/11 undesired configurations in the jump set, delta " << sci(params.delta);
    results.push_back({"critical points: undesired configurations lie in the jump set", ok,
                       detail.str()});

    Worst eh;
    for (const auto& r : reports) {
      if (r.point.mode == Mode::I) eh.update(r.eh_norm);
    }
    results.push_back(tolerance_check("critical points: mode I rows have e_H = 0", eh, tol));
  }

  {
    constexpr int kPerMode = 100;
    double worst = 0.0;
    for (Mode m : kModes) {
      for (int k = 0; k < kPerMode; ++k) {
        const FlowSample s{random_rotation(rng), random_rotation(rng), random_vec3(rng),
                           random_vec3(rng, 0.2), random_vec3(rng, 0.2)};
        const double fd = psi_rate_fd(m, s, model, params);
        const double an = psi_rate_analytic(m, s, model, params);
        worst = std::max(worst, std::abs(fd - an) / std::abs(an));
      }
    }
    results.push_back({"flow: d/dt Psi = -gamma_tilde^T e_H - k_R |e_H|^2", worst <= 1e-6,
                       "max relative error " + sci(worst) + " over 100 states per mode"});
  }

  {
    Scenario base;
    for (const auto& d : standard_directions()) {
      base.directions.push_back(d.direction);
      base.weights.push_back(d.weight);
    }
    base.gamma = Vec3(0.1, -0.1, 0.2);
    base.gamma_bar0 = Vec3(0.0997, -0.1042, 0.2027);
    base.R_bar0 << 0.2527, -0.8907, -0.3779, 0.6381, 0.4470, -0.6270, 0.7273, -0.0827, -0.6813;
    const auto orders = observed_cg2_orders(base, {0.1, 0.05, 0.025}, 3.0);
    bool ok = true;
    std::ostringstream detail;
    detail << "orders";
    for (double p : orders) {
      ok = ok && p >= 1.7 && p <= 2.3;
      detail << ' ' << p;
    }
    results.push_back({"integrator: cg2 observed order in [1.7, 2.3]", ok, detail.str()});
  }

  return results;
}

}  // namespace so3obs::verify
