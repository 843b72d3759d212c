#pragma once

#include <ostream>

namespace cqed::cli {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr const char* kFormatVersion = "1";

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidInput = 2,
  kExitFitFailure = 3,
  kExitSolverFailure = 4,
};

/// Run one subcommand. Data goes to `out` (or the --out file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cqed::cli
