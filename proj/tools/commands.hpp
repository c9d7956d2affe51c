#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace costtree::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDataError = 3 };

// Parses `args` (without the program name) and runs the chosen subcommand.
// Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace costtree::cli
