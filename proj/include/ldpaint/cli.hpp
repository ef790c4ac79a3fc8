#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ldpaint {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitInput = 3,
  kExitOutput = 4,
};

// `args` excludes the program name. Diagnostics go to `err` as one line.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ldpaint
