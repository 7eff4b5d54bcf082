#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cudf::cli {

enum ExitCode : int { ok = 0, invalid = 1, usage = 2, budget = 3 };

/// Runs one command line (without the program name). Data goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cudf::cli
