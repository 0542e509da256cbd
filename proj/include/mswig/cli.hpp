#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mswig {

// Runs one subcommand against the given argument list (program name excluded).
// Returns the process exit code: 0 = success, 1 = validation error (flags,
// files, graph or role integrity), 2 = estimation error. Reports go to `out`,
// the run log and error messages to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mswig
