#pragma once

// Command-line front end. run() holds everything main() would do so the
// commands can be exercised in-process.
//
//   canon check-esp FILE
//   canon reduce FILE
//   canon realize FILE [--eps E]
//   canon compare FILE_A FILE_B
//   canon oracle FILE [--trials N]
//
// Common flags: --tol --margin --horizon --seed --format text|structured
// --output PATH.

#include <iosfwd>
#include <string>
#include <vector>

namespace canon::cli {

enum ExitCode : int {
  kOk = 0,
  kSemanticFailure = 2,
  kIndeterminate = 3,
  kInfeasible = 4,
  kUsage = 64,
};

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace canon::cli
