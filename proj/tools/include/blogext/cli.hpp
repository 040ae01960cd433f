#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace blogext::cli {

// Exit statuses shared by every subcommand.
enum ExitCode : int { ok = 0, partial_failure = 1, usage_error = 2 };

// Runs the command line `args` (args[0] is the program name). Output goes to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blogext::cli
