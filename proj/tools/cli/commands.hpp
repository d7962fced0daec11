#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace digits::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitModel = 4,
  kExitDegenerate = 5,
};

/// Entry point shared by the executable and the tests. `args` excludes
/// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace digits::cli
