#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ifbs::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // validation failure, failed assertion, no convergence
  kBadInput = 2,     // usage error, unreadable or malformed input
  kRuntimeError = 3, // solver or simulator failure
};

/// Runs the command line `args` (without the program name), writing human
/// readable progress to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ifbs::cli
