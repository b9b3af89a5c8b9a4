#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hlc::cli {

enum ExitCode { kOk = 0, kNegative = 1, kBudget = 2, kInvalid = 3, kCap = 4 };

/// Runs the hlc command line with args[0] the program name. Tables and JSON
/// go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hlc::cli
