#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace equitile::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kNegative = 3,
  kNumericalFailure = 4,
};

inline constexpr double kDefaultTolerance = 1e-10;

// Tolerance from EQUITILE_TOL, or the default when unset. Throws
// InvalidArgument on an unparsable or non-positive value.
double tolerance_from_environment();

// Runs `equitile <args...>` (args excludes the program name). Reports go to
// `out`, diagnostics to `err`; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace equitile::cli
