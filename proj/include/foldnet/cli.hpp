#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace foldnet {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitInfeasible = 2,
  kExitVerification = 3,
  kExitUsage = 64,
};

// Runs one command line (without the program name). Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace foldnet
