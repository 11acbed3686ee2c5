#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "so3obs/verify.hpp"

using namespace so3obs;

namespace {

const verify::CheckResult* find(const std::vector<verify::CheckResult>& rs, const std::string& name) {
  for (const auto& r : rs) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("clean battery passes") {
  verify::VerifyOptions opt;
  opt.samples = 200;
  const auto results = verify::run_verification(opt);
  CHECK(results.size() >= 15);
  for (const auto& r : results) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.passed);
  }
}

TEST_CASE("a hysteresis gap above the bound is caught") {
  verify::VerifyOptions opt;
  opt.samples = 50;
  opt.delta = 1.0;
  const auto results = verify::run_verification(opt);
  const auto* cp = find(results, "critical points: undesired configurations lie in the jump set");
  REQUIRE(cp != nullptr);
  CHECK_FALSE(cp->passed);
}

TEST_CASE("a perturbed exponential is caught") {
  verify::VerifyOptions opt;
  opt.samples = 50;
  opt.exp_map = [](const Vec3& v) { return exp_hat(v + Vec3(1e-6, 0, 0)); };
  const auto results = verify::run_verification(opt);
  for (const char* n : {"exp: R exp(w) R^T = exp(R w)", "exp: closed form matches power series"}) {
    const auto* r = find(results, n);
    REQUIRE(r != nullptr);
    CHECK_FALSE(r->passed);
  }
  const auto* hat = find(results, "hat: hat(x) y = x cross y");
  REQUIRE(hat != nullptr);
  CHECK(hat->passed);
}

TEST_CASE("critical point evaluation") {
  const ReferenceModel m = ReferenceModel::build(standard_directions());
  const HybridParams p = HybridParams::with_default_delta(m, 1.9, 0.899, Gains{});
  const auto reports = verify::evaluate_critical_points(m, p, exp_hat(Vec3(0.3, 0.1, -0.5)));
  REQUIRE(reports.size() == 12);
  int in_jump = 0;
  for (const auto& r : reports) {
    CHECK(r.rho <= r.psi[0] + 1e-15);
    if (r.in_jump_set) ++in_jump;
  }
  CHECK(in_jump == 11);
}

TEST_CASE("series exponential") {
  const Vec3 v(0.4, -1.2, 2.0);
  CHECK((verify::exp_series(v) - exp_hat(v).matrix()).norm() < 1e-13);
  CHECK((verify::exp_series(Vec3::Zero()) - Mat3::Identity()).norm() == 0.0);
}
