#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace repliscope {

/// Exit statuses of the command-line front end.
enum ExitStatus : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNoConvergence = 3,
  kExitIo = 4,
};

/// Runs one `repliscope` invocation. `args` excludes the program name.
/// Datasets go to the paths named by --out ("-" or no --out means `out`);
/// `err` receives diagnostics only.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace repliscope
