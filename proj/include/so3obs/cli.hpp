#pragma once

#include <ostream>

namespace so3obs {

/// Entry point of the so3obs tool. Exit codes: 0 success, 1 invalid scenario
/// or parameters (including bad arguments), 2 I/O failure, 3 verification
/// failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace so3obs
