#pragma once

#include <ostream>

namespace mporbits::cli {

enum ExitCode : int { kOk = 0, kAssertion = 2, kBudget = 3, kUsage = 4 };

// Runs the command line; output goes to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mporbits::cli
