#pragma once

#include <string>
#include <vector>

namespace npct {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitIo = 4,
};

/// Parses the command line, runs the chosen subcommand and returns the
/// process exit code. Errors are reported on stderr; nothing is thrown.
int parse_and_dispatch(int argc, char** argv);
int parse_and_dispatch(std::vector<std::string> args);

}  // namespace npct
