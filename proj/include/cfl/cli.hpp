#pragma once

#include <iosfwd>

namespace cfl::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailure = 1, kInvalidConfig = 2 };

/// Entry point shared by the `cfl` binary and the tests.  Subcommands:
/// rates, schedule, verify, simulate.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cfl::cli
