#include "so3obs/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <string>

#include "so3obs/csv.hpp"
#include "so3obs/scenario.hpp"
#include "so3obs/verify.hpp"

namespace so3obs {

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerify = 3;

Scenario load_with_env(const std::string& path) {
  Scenario scn = load_scenario(path);
  if (const char* env = std::getenv("SO3_OBS_SEED")) {
    const std::string s(env);
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorKind::InvalidScenario, "SO3_OBS_SEED is not an unsigned integer: '" + s + "'");
    }
    scn.noise.seed = seed;
  }
  scn.validate();
  return scn;
}

std::string join_times(const std::vector<double>& ts, char sep) {
  std::ostringstream os;
  os << std::setprecision(6);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) os << sep;
    os << ts[i];
  }
  return os.str();
}

/// First time after which att_err stays below `level`, or -1.
double settle_time(const RunResult& r, double level) {
  double t = -1.0;
  for (const auto& rec : r.records) {
    if (rec.att_err >= level) {
      t = -1.0;
    } else if (t < 0.0) {
      t = rec.t;
    }
  }
  return t;
}

double max_ortho_defect(const RunResult& r) {
  double m = 0.0;
  for (const auto& rec : r.records) m = std::max(m, rec.ortho_defect);
  return m;
}

void describe_projection(std::ostream& out, const RunResult& r) {
  out << "initial estimate projected onto SO(3), Frobenius residual " << r.projection_residual
      << '\n';
}

void describe_run(std::ostream& out, const char* label, const RunResult& r) {
  const auto& last = r.records.back();
  out << label << ": final att_err " << last.att_err << ", final |gamma - gamma_bar| "
      << last.gamma_err.norm() << ", jumps " << r.jumps.size();
  const auto sw = r.switch_times();
  if (!sw.empty()) out << ", switch times [s] " << join_times(sw, ' ');
  out << '\n';
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path, std::ostream& out) {
  const Scenario scn = load_with_env(scenario_path);
  const RunResult r = run(scn);
  write_csv(r.records, out_path);
  out << "scenario " << scn.name << " (" << to_string(r.observer) << ", "
      << to_string(r.integrator) << ", " << r.records.size() << " records) -> " << out_path
      << '\n';
  if (r.delta_defaulted) out << "delta not given; using half of its upper bound: " << r.delta << '\n';
  describe_projection(out, r);
  describe_run(out, "result", r);
  out << "result=ok command=simulate final_att_err=" << r.records.back().att_err
      << " jumps=" << r.jumps.size() << " switch_times=" << join_times(r.switch_times(), ';')
      << " delta=" << r.delta << " delta_default=" << (r.delta_defaulted ? 1 : 0)
      << " r_bar0_residual=" << r.projection_residual << '\n';
  return 0;
}

int cmd_compare_observers(const std::string& scenario_path, const std::string& prefix,
                          std::ostream& out) {
  const Scenario scn = load_with_env(scenario_path);
  const RunPair pair = compare_observers(scn);
  write_csv(pair.first.records, prefix + "_hybrid.csv");
  write_csv(pair.second.records, prefix + "_complementary.csv");
  out << "scenario " << scn.name << " -> " << prefix << "_hybrid.csv, " << prefix
      << "_complementary.csv\n";
  describe_projection(out, pair.first);
  describe_run(out, "hybrid", pair.first);
  describe_run(out, "complementary", pair.second);
  const double th = settle_time(pair.first, 0.1);
  const double tc = settle_time(pair.second, 0.1);
  out << "att_err < 0.1 from t = " << th << " s (hybrid), " << tc << " s (complementary)\n";
  out << "result=ok command=compare-observers hybrid_final_att_err="
      << pair.first.records.back().att_err
      << " complementary_final_att_err=" << pair.second.records.back().att_err
      << " hybrid_settle=" << th << " complementary_settle=" << tc
      << " jumps=" << pair.first.jumps.size()
      << " switch_times=" << join_times(pair.first.switch_times(), ';')
      << " delta=" << pair.first.delta
      << " delta_default=" << (pair.first.delta_defaulted ? 1 : 0)
      << " r_bar0_residual=" << pair.first.projection_residual << '\n';
  return 0;
}

int cmd_compare_integrators(const std::string& scenario_path, const std::string& prefix,
                            std::ostream& out) {
  const Scenario scn = load_with_env(scenario_path);
  const RunPair pair = compare_integrators(scn);
  write_csv(pair.first.records, prefix + "_cg2.csv");
  write_csv(pair.second.records, prefix + "_naive_rk4.csv");
  out << "scenario " << scn.name << " (" << to_string(scn.observer) << ") -> " << prefix
      << "_cg2.csv, " << prefix << "_naive_rk4.csv\n";
  describe_projection(out, pair.first);
  describe_run(out, "cg2", pair.first);
  describe_run(out, "naive_rk4", pair.second);
  const double d1 = max_ortho_defect(pair.first);
  const double d2 = max_ortho_defect(pair.second);
  out << "max |R_bar^T R_bar - I|_F: " << d1 << " (cg2), " << d2 << " (naive_rk4)\n";
  out << "result=ok command=compare-integrators cg2_final_att_err="
      << pair.first.records.back().att_err
      << " naive_rk4_final_att_err=" << pair.second.records.back().att_err
      << " cg2_max_ortho_defect=" << d1 << " naive_rk4_max_ortho_defect=" << d2
      << " delta=" << pair.first.delta
      << " delta_default=" << (pair.first.delta_defaulted ? 1 : 0)
      << " r_bar0_residual=" << pair.first.projection_residual << '\n';
  return 0;
}

int cmd_verify(std::ostream& out) {
  const auto results = verify::run_verification();
  int failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " -- " << r.detail << '\n';
    if (!r.passed) ++failed;
  }
  out << "result=" << (failed ? "fail" : "ok") << " command=verify checks=" << results.size()
      << " failed=" << failed << '\n';
  return failed ? kExitVerify : 0;
}

void print_model(std::ostream& out, const char* label, const ReferenceModel& m) {
  const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, ", ", "\n", "  [", "]");
  out << label << "\n  lambda = (" << m.lambda(0) << ", " << m.lambda(1) << ", " << m.lambda(2)
      << ")\n  U =\n"
      << m.U().matrix().format(fmt) << "\n  K =\n"
      << m.K().format(fmt) << '\n';
}

int cmd_print_model(std::ostream& out) {
  out << std::setprecision(10);
  const auto dirs = standard_directions();
  out << "directions (unit, inertial) and weights:\n";
  for (const auto& d : dirs) {
    out << "  (" << d.direction.x() << ", " << d.direction.y() << ", " << d.direction.z()
        << ")  k = " << d.weight << '\n';
  }
  const auto desc = ReferenceModel::build(dirs, {EigenOrder::Descending});
  const auto asc = ReferenceModel::build(dirs, {EigenOrder::Ascending});
  print_model(out, "eigen_order = descending", desc);
  print_model(out, "eigen_order = ascending", asc);
  const auto bound = hybrid::delta_upper_bound(desc, 1.9, 0.899);
  out << "delta upper bound (alpha 1.9, beta 0.899, descending) = " << bound << '\n';
  out << "result=ok command=print-model lambda=" << desc.lambda(0) << ';' << desc.lambda(1) << ';'
      << desc.lambda(2) << " delta_bound=" << bound << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attitude observers on SO(3): simulation, comparison and verification"};
  app.name("so3obs");
  app.require_subcommand(1, 1);

  std::string scenario;
  std::string out_path;
  std::string prefix;

  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write its time series");
  simulate->add_option("--scenario", scenario, "Scenario file")->required();
  simulate->add_option("--out", out_path, "Output CSV")->required();

  auto* cmp_obs = app.add_subcommand("compare-observers",
                                     "Hybrid and complementary observers on one measurement stream");
  cmp_obs->add_option("--scenario", scenario, "Scenario file")->required();
  cmp_obs->add_option("--out-prefix", prefix, "Writes <p>_hybrid.csv and <p>_complementary.csv")
      ->required();

  auto* cmp_int = app.add_subcommand("compare-integrators",
                                     "cg2 and naive RK4 on one measurement stream");
  cmp_int->add_option("--scenario", scenario, "Scenario file")->required();
  cmp_int->add_option("--out-prefix", prefix, "Writes <p>_cg2.csv and <p>_naive_rk4.csv")
      ->required();

  auto* verify_cmd = app.add_subcommand("verify", "Run the property battery");
  auto* model_cmd = app.add_subcommand("print-model", "Print the standard reference model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(scenario, out_path, out);
    if (cmp_obs->parsed()) return cmd_compare_observers(scenario, prefix, out);
    if (cmp_int->parsed()) return cmd_compare_integrators(scenario, prefix, out);
    if (verify_cmd->parsed()) return cmd_verify(out);
    if (model_cmd->parsed()) return cmd_print_model(out);
  } catch (const Error& e) {
    err << "so3obs: " << e.what() << '\n';
    return e.kind() == ErrorKind::Io ? kExitIo : kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace so3obs
