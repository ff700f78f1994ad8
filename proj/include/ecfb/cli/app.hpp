#pragma once

#include <ostream>

namespace ecfb::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitNumeric = 4,
};

/// Parses argv, runs one subcommand and maps failures to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ecfb::cli
