#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phylocompat::cli {

/// Exit codes of the phylocompat command.
enum ExitCode : int {
  kCompatible = 0,
  kIncompatible = 1,
  kUndecided = 2,
  kError = 3,
};

/// Runs one invocation. `args` excludes the program name. Normal output goes
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phylocompat::cli
