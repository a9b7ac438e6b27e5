#pragma once

#include <iosfwd>

namespace flowlogic::cli {

// Exit codes of run().
inline constexpr int kExitPositive = 0;  // satisfied, valid, solution found
inline constexpr int kExitNegative = 1;  // unsatisfied, invalid, no solution
inline constexpr int kExitError = 2;     // usage or input error, engine disagreement

// Runs one subcommand. The report goes to `out` (JSON with --json, text
// otherwise); usage problems and diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flowlogic::cli
