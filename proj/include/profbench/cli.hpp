#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace profbench::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,
  kDataError = 2,
};

// Runs one command line. `args` excludes the program name. Diagnostics go to
// `err`; `out` receives only the command's result. ANSI styling in `rank`
// tables is used only when `color` is set and PROFBENCH_NO_COLOR is unset.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
        bool color = false);

}  // namespace profbench::cli
