#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "so3obs/scenario.hpp"

namespace so3obs {

inline constexpr std::string_view kCsvHeader =
    "t,att_err,mode,e_h_norm,gamma_err_x,gamma_err_y,gamma_err_z,psi,lyapunov,ortho_defect,jump_flag";

/// Header plus one row per record, reals printed with 17 significant digits.
std::string to_csv(const std::vector<TimeSeriesRecord>& records);
std::vector<TimeSeriesRecord> from_csv(std::string_view text);

/// Throws Error{Io} with the path on failure.
void write_csv(const std::vector<TimeSeriesRecord>& records, const std::filesystem::path& path);
std::vector<TimeSeriesRecord> read_csv(const std::filesystem::path& path);

}  // namespace so3obs
