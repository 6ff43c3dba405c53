#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace varpen::cli {

enum ExitCode : int {
  kOk = 0,
  kThresholdFails = 1,
  kInputError = 2,
  kUnsupported = 3,
  kLowerBoundOnly = 4,
};

/// Runs one command line (without the program name) and returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace varpen::cli
