#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hampath::cli {

enum ExitStatus : int {
  kOk = 0,
  kFailure = 1,          // unexpected library error
  kUsage = 2,            // unknown command or flag, malformed value
  kBadCombination = 3,   // flags that cannot be used together
  kInputError = 4,       // unreadable or malformed graph file
  kOversize = 5,         // graph above the enumeration cap
  kRefused = 6,          // constraint or precondition violated
};

// args[0] is the program name. Reports go to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hampath::cli
