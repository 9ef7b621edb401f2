#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ugf {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInvalid = 2,
  kExitOracleMismatch = 3,
};

/// Runs the command-line tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ugf
