#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "so3obs/csv.hpp"

using namespace so3obs;

namespace {

std::vector<TimeSeriesRecord> sample() {
  std::vector<TimeSeriesRecord> v(3);
  v[0] = {0.0, 2.0, 1, 0.5, Vec3(0.1, -0.1, 0.2), 1.25, 1.3, 1e-16, false};
  v[1] = {0.05, 1.0 / 3.0, 3, 1e-300, Vec3(-1e-9, 0, 3.5e7), 0.0, 0.0, 0.0, true};
  v[2] = {0.1, 0.0, 2, 0.0, Vec3::Zero(), -0.0, 2.0 / 7.0, 4.4e-16, false};
  return v;
}

}  // namespace

TEST_CASE("empty input gives the header only") {
  CHECK(to_csv({}) == std::string(kCsvHeader) + "\n");
  CHECK(from_csv(to_csv({})).empty());
}

TEST_CASE("column order is fixed") {
  std::istringstream in(to_csv(sample()));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == kCsvHeader);
  CHECK(row.rfind("0,2,1,0.5,0.10000000000000001,-0.10000000000000001,0.20000000000000001,1.25,1.3", 0) == 0);
  CHECK(row.substr(row.size() - 2) == ",0");
  std::getline(in, row);
  CHECK(row.substr(row.size() - 2) == ",1");
}

TEST_CASE("round trip is exact") {
  const auto in = sample();
  const auto out = from_csv(to_csv(in));
  REQUIRE(out.size() == in.size());
  for (std::size_t k = 0; k < in.size(); ++k) {
    CHECK(out[k].t == in[k].t);
    CHECK(out[k].att_err == in[k].att_err);
    CHECK(out[k].mode == in[k].mode);
    CHECK(out[k].e_h_norm == in[k].e_h_norm);
    CHECK(out[k].gamma_err == in[k].gamma_err);
    CHECK(out[k].psi == in[k].psi);
    CHECK(out[k].lyapunov == in[k].lyapunov);
    CHECK(out[k].ortho_defect == in[k].ortho_defect);
    CHECK(out[k].jump_flag == in[k].jump_flag);
  }
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(from_csv("t,att_err\n"), Error);
  CHECK_THROWS_AS(from_csv(std::string(kCsvHeader) + "\n1,2,3\n"), Error);
  CHECK_THROWS_AS(from_csv(std::string(kCsvHeader) + "\n0,a,1,0,0,0,0,0,0,0,0\n"), Error);
}

TEST_CASE("files") {
  const auto path = std::filesystem::temp_directory_path() / "so3obs_test_csv.csv";
  write_csv(sample(), path);
  CHECK(read_csv(path).size() == 3);
  std::filesystem::remove(path);

  try {
    write_csv(sample(), "/nonexistent/dir/out.csv");
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
    CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(read_csv("/nonexistent/in.csv"), Error);
}
