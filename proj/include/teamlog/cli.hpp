#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace teamlog::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,            // satisfied / satisfiable / success
    kNegative = 1,      // not satisfied / unsatisfiable
    kUsage = 2,         // usage, parse or inapplicable-engine error
    kResource = 3,      // enumeration or vertex cap exceeded
    kExhausted = 4,     // satisfiability search ran out of budget
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace teamlog::cli
