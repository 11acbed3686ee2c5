#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "so3obs/csv.hpp"
#include "so3obs/scenario.hpp"

using namespace so3obs;

namespace {

Scenario case_file(const char* name) {
  return load_scenario(std::string(SO3OBS_SCENARIO_DIR) + "/" + name + ".scn");
}

std::string parse_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidScenario);
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const char* part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("defaults") {
  const Scenario s = parse_scenario("# nothing but a comment\n");
  CHECK(s.duration == 60.0);
  CHECK(s.h == 0.05);
  CHECK(s.step_count() == 1200);
  CHECK(s.directions.size() == 3);
  CHECK(s.weights.size() == 3);
  CHECK(s.eigen_order == EigenOrder::Descending);
  CHECK(s.alpha == 1.9);
  CHECK(s.beta == 0.899);
  CHECK_FALSE(s.delta.has_value());
  CHECK(s.initial_mode == Mode::I);
  CHECK(s.observer == ObserverKind::Hybrid);
  CHECK(s.integrator == IntegratorKind::Cg2);
  CHECK_FALSE(s.noise.enabled());
}

TEST_CASE("parse values") {
  const Scenario s = parse_scenario(
      "name = x\nduration = 2\nstep = 0.01\nk_R = 2   # trailing comment\nk_I = 0.5\n"
      "delta = 1e-4\ngamma = [0.1, 0, -0.2]\nR_bar0 = [[1,0,0],\n [0,1,0],\n [0,0,1]]\n"
      "initial_mode = 3\nobserver = complementary\nintegrator = naive_rk4\n"
      "noise_dir = 0.01\nnoise_gyro = 0.02\nseed = 17\neigen_order = ascending\n");
  CHECK(s.name == "x");
  CHECK(s.step_count() == 200);
  CHECK(s.gains.k_R == 2.0);
  CHECK(s.gains.k_I == 0.5);
  CHECK(*s.delta == 1e-4);
  CHECK(s.gamma == Vec3(0.1, 0, -0.2));
  CHECK(s.R_bar0 == Mat3::Identity());
  CHECK(s.initial_mode == Mode::III);
  CHECK(s.observer == ObserverKind::Complementary);
  CHECK(s.integrator == IntegratorKind::NaiveRk4);
  CHECK(s.noise.sigma_dir == 0.01);
  CHECK(s.noise.sigma_gyro == 0.02);
  CHECK(s.noise.seed == 17);
  CHECK(s.eigen_order == EigenOrder::Ascending);
}

TEST_CASE("parse errors name the problem") {
  CHECK(contains(parse_error("bogus = 1\n"), "unknown key 'bogus'"));
  CHECK(contains(parse_error("alpha = 1.9\nalpha = 1.8\n"), "duplicate key 'alpha'"));
  CHECK(contains(parse_error("gamma = [1, 2]\n"), "gamma"));
  CHECK(contains(parse_error("gamma = [1, 2, 3\n"), "unterminated"));
  CHECK(contains(parse_error("alpha = fast\n"), "expected a number"));
  CHECK(contains(parse_error("duration = 0\n"), "duration must be positive"));
  CHECK(contains(parse_error("step = -1\n"), "step must be positive"));
  CHECK(contains(parse_error("duration = 1\nstep = 0.3\n"), "integer multiple"));
  CHECK(contains(parse_error("weights = [1, 2]\n"), "differ in length"));
  CHECK(contains(parse_error("initial_mode = 4\n"), "initial_mode"));
  CHECK(contains(parse_error("observer = kalman\n"), "observer"));
  CHECK(contains(parse_error("eigen_order = random\n"), "eigen_order"));
  CHECK(contains(parse_error("R_bar0 = [[1,0,0],[0,1,0]]\n"), "three rows"));
  try {
    load_scenario("/nonexistent/none.scn");
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
    CHECK(contains(e.what(), "/nonexistent/none.scn"));
  }
}

TEST_CASE("shipped scenarios load") {
  for (const char* n : {"paper_case1", "paper_case2", "long_horizon"}) {
    const Scenario s = case_file(n);
    CHECK(s.name == n);
    CHECK(s.eigen_order == EigenOrder::Ascending);
    CHECK(s.R_bar0(2, 2) == -0.6813);
  }
  CHECK(case_file("paper_case1").gamma.isZero());
  CHECK(case_file("long_horizon").duration == 150.0);
}

TEST_CASE("truth maneuver") {
  const TruthState s0 = truth_state(0.0);
  CHECK((s0.R.matrix() - oracle::rot_x(-2.0)).norm() < 1e-15);
  double max_rate = 0.0;
  for (double t = 0.0; t <= 60.0; t += 0.37) {
    const TruthState s = truth_state(t, Vec3(0.1, 0, 0));
    CHECK(s.gamma == Vec3(0.1, 0, 0));
    // Body rate from the finite-difference derivative of R.
    Mat3 dR;
    for (int i = 0; i < 9; ++i) {
      dR(i) = oracle::derivative([&](double x) { return truth_state(x).R.matrix()(i); }, t, 1e-3);
    }
    const Mat3 w = s.R.matrix().transpose() * dR;
    CHECK((Vec3(w(2, 1), w(0, 2), w(1, 0)) - s.omega).norm() < 1e-6);
    max_rate = std::max(max_rate, s.omega.norm());
  }
  CHECK(max_rate <= 4.5);
}

TEST_CASE("runs are deterministic") {
  Scenario s = case_file("paper_case2");
  s.duration = 5.0;
  s.noise = {0.01, 0.005, 3};
  CHECK(to_csv(run(s).records) == to_csv(run(s).records));
  s.noise.seed = 4;
  const auto a = run(s).records;
  s.noise.seed = 3;
  CHECK(to_csv(a) != to_csv(run(s).records));
}

TEST_CASE("case runs switch out and back") {
  const RunResult r2 = run(case_file("paper_case2"));
  CHECK(r2.records.size() == 1201);
  CHECK(r2.records.front().t == 0.0);
  CHECK(r2.records.back().t == doctest::Approx(60.0));
  CHECK(r2.delta_defaulted);
  CHECK(r2.projection_residual == doctest::Approx(1.035).epsilon(1e-3));
  REQUIRE(r2.jumps.size() == 2);
  CHECK(r2.jumps[0].from == Mode::I);
  CHECK(r2.jumps[0].to == Mode::III);
  CHECK(r2.jumps[1].from == Mode::III);
  CHECK(r2.jumps[1].to == Mode::I);
  const auto sw = r2.switch_times();
  CHECK(sw[0] == doctest::Approx(0.2));
  CHECK(sw[1] == doctest::Approx(1.2));
  for (const auto& j : r2.jumps) CHECK(j.lyapunov_before - j.lyapunov_after >= r2.delta);
  CHECK(r2.records.back().att_err < 0.01);
  CHECK(r2.records.back().gamma_err.norm() < 0.01);

  const auto sw1 = run(case_file("paper_case1")).switch_times();
  REQUIRE(sw1.size() == 2);
  CHECK(sw1[1] == doctest::Approx(1.45));
}

TEST_CASE("paired runs share one measurement stream") {
  Scenario s = case_file("paper_case2");
  s.duration = 3.0;
  s.noise = {0.02, 0.01, 9};
  const ReferenceModel m = build_model(s);
  const auto a = measurement_stream(s, m);
  const auto b = measurement_stream(s, m);
  REQUIRE(a.size() == s.step_count() + 1);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].omega_y == b[k].omega_y);
    CHECK(a[k].B.matrix() == b[k].B.matrix());
  }
  const RunPair obs = compare_observers(s);
  CHECK(obs.first.observer == ObserverKind::Hybrid);
  CHECK(obs.second.observer == ObserverKind::Complementary);
  CHECK(obs.second.jumps.empty());
  Scenario c = s;
  c.observer = ObserverKind::Complementary;
  CHECK(to_csv(run(c, m, a).records) == to_csv(obs.second.records));

  const RunPair ints = compare_integrators(s);
  CHECK(ints.first.integrator == IntegratorKind::Cg2);
  CHECK(ints.second.integrator == IntegratorKind::NaiveRk4);
  CHECK_THROWS_AS(run(s, m, std::vector<MeasurementFrame>(a.begin(), a.end() - 1)), Error);
}

TEST_CASE("hybrid parameter bounds surface at run time") {
  Scenario s = case_file("paper_case2");
  s.duration = 1.0;
  s.beta = 0.95;
  try {
    run(s);
    FAIL("expected InvalidParams");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParams);
  }
}
