#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vircli {

/// Runs one subcommand; args excludes the program name. Returns the process
/// exit code: 0 success, 1 invalid input or failed verdict, 2 numerical
/// failure (the failing stage is named on err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Closed-form example checks behind `selftest`; one line per check.
int run_selftest(std::ostream& out);

}  // namespace vircli
