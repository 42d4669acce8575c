#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace innerlab::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // failed acceptance criteria or an unexpected error
  kPrecondition = 2,
  kResource = 3,
  kNumerical = 4,
  kUsage = 64,
};

/// Runs the innerlab command line; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace innerlab::cli
