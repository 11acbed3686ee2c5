#include "so3obs/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace so3obs {

namespace {

void append_real(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

double parse_real(const std::string& field, std::size_t row) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw Error(ErrorKind::InvalidScenario,
                "csv row " + std::to_string(row) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

std::string to_csv(const std::vector<TimeSeriesRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    append_real(out, r.t);
    out += ',';
    append_real(out, r.att_err);
    out += ',';
    out += std::to_string(r.mode);
    out += ',';
    append_real(out, r.e_h_norm);
    for (int k = 0; k < 3; ++k) {
      out += ',';
      append_real(out, r.gamma_err(k));
    }
    out += ',';
    append_real(out, r.psi);
    out += ',';
    append_real(out, r.lyapunov);
    out += ',';
    append_real(out, r.ortho_defect);
    out += ',';
    out += r.jump_flag ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::vector<TimeSeriesRecord> from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(ErrorKind::InvalidScenario, "csv header does not match the record schema");
  }
  std::vector<TimeSeriesRecord> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 11) {
      throw Error(ErrorKind::InvalidScenario, "csv row " + std::to_string(row) + ": expected 11 fields");
    }
    TimeSeriesRecord r;
    r.t = parse_real(f[0], row);
    r.att_err = parse_real(f[1], row);
    r.mode = static_cast<int>(parse_real(f[2], row));
    r.e_h_norm = parse_real(f[3], row);
    r.gamma_err = Vec3(parse_real(f[4], row), parse_real(f[5], row), parse_real(f[6], row));
    r.psi = parse_real(f[7], row);
    r.lyapunov = parse_real(f[8], row);
    r.ortho_defect = parse_real(f[9], row);
    r.jump_flag = parse_real(f[10], row) != 0.0;
    out.push_back(r);
  }
  return out;
}

void write_csv(const std::vector<TimeSeriesRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing: " + std::strerror(errno));
  }
  const std::string text = to_csv(records);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::vector<TimeSeriesRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_csv(buf.str());
}

}  // namespace so3obs
