#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "so3obs/cli.hpp"
#include "so3obs/csv.hpp"

using namespace so3obs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "so3obs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string last_line(const std::string& s) {
  const auto end = s.find_last_not_of('\n');
  return s.substr(s.rfind('\n', end) + 1, end - s.rfind('\n', end));
}

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "so3obs_test_cli";
  fs::create_directories(d);
  return d;
}

std::string write_scenario(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / (name + ".scn");
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kCase2 = std::string(SO3OBS_SCENARIO_DIR) + "/paper_case2.scn";

}  // namespace

TEST_CASE("simulate writes the series and a summary") {
  const std::string out = (scratch() / "case2.csv").string();
  const Outcome o = cli({"simulate", "--scenario", kCase2, "--out", out});
  CHECK(o.code == 0);
  CHECK(o.err.empty());
  const std::string last = last_line(o.out);
  CHECK(last.rfind("result=ok command=simulate", 0) == 0);
  CHECK(last.find("jumps=2") != std::string::npos);
  CHECK(last.find("switch_times=0.2;1.2 ") != std::string::npos);
  CHECK(last.find("delta_default=1") != std::string::npos);
  CHECK(read_csv(out).size() == 1201);
}

TEST_CASE("error exit codes") {
  const auto bad = write_scenario("zero", "duration = 0\n");
  Outcome o = cli({"simulate", "--scenario", bad, "--out", (scratch() / "x.csv").string()});
  CHECK(o.code == 1);
  CHECK(o.err.find("duration must be positive") != std::string::npos);

  o = cli({"simulate", "--scenario", kCase2, "--out", "/nonexistent/dir/x.csv"});
  CHECK(o.code == 2);
  CHECK(o.err.find("Io") != std::string::npos);

  o = cli({"simulate", "--scenario", "/nonexistent/x.scn", "--out", "x.csv"});
  CHECK(o.code == 2);

  CHECK(cli({}).code == 1);
  CHECK(cli({"simulate"}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("compare-observers") {
  const std::string prefix = (scratch() / "obs").string();
  Outcome o = cli({"compare-observers", "--scenario", kCase2, "--out-prefix", prefix});
  CHECK(o.code == 0);
  CHECK(fs::exists(prefix + "_hybrid.csv"));
  CHECK(fs::exists(prefix + "_complementary.csv"));
  CHECK(last_line(o.out).find("hybrid_settle=") != std::string::npos);

  const auto bad = write_scenario("alpha", "duration = 1\nalpha = 2.5\n");
  o = cli({"compare-observers", "--scenario", bad, "--out-prefix", prefix});
  CHECK(o.code == 1);
  CHECK(o.err.find("InvalidParams") != std::string::npos);
  CHECK(o.err.find("alpha") != std::string::npos);
}

TEST_CASE("compare-integrators") {
  const auto s = write_scenario("short", "duration = 5\ngamma = [0.1, -0.1, 0.2]\n");
  const std::string prefix = (scratch() / "int").string();
  const Outcome o = cli({"compare-integrators", "--scenario", s, "--out-prefix", prefix});
  CHECK(o.code == 0);
  CHECK(read_csv(prefix + "_cg2.csv").size() == 101);
  CHECK(read_csv(prefix + "_naive_rk4.csv").size() == 101);
  CHECK(last_line(o.out).find("naive_rk4_max_ortho_defect=") != std::string::npos);
}

TEST_CASE("verify and print-model") {
  Outcome o = cli({"verify"});
  CHECK(o.code == 0);
  CHECK(o.out.find("FAIL") == std::string::npos);
  CHECK(last_line(o.out).rfind("result=ok command=verify", 0) == 0);

  o = cli({"print-model"});
  CHECK(o.code == 0);
  CHECK(o.out.find("eigen_order = ascending") != std::string::npos);
  CHECK(last_line(o.out).find("delta_bound=") != std::string::npos);
}

TEST_CASE("SO3_OBS_SEED overrides the noise seed") {
  const auto s = write_scenario("noisy", "duration = 2\nnoise_dir = 0.01\nnoise_gyro = 0.01\nseed = 1\n");
  const fs::path a = scratch() / "a.csv", b = scratch() / "b.csv", c = scratch() / "c.csv";
  ::unsetenv("SO3_OBS_SEED");
  CHECK(cli({"simulate", "--scenario", s, "--out", a.string()}).code == 0);
  ::setenv("SO3_OBS_SEED", "1", 1);
  CHECK(cli({"simulate", "--scenario", s, "--out", b.string()}).code == 0);
  ::setenv("SO3_OBS_SEED", "2", 1);
  CHECK(cli({"simulate", "--scenario", s, "--out", c.string()}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) != slurp(c));
  ::setenv("SO3_OBS_SEED", "two", 1);
  const Outcome o = cli({"simulate", "--scenario", s, "--out", c.string()});
  CHECK(o.code == 1);
  CHECK(o.err.find("SO3_OBS_SEED") != std::string::npos);
  ::unsetenv("SO3_OBS_SEED");
}
