#pragma once

#include <iosfwd>

namespace cbary {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,  // invariance defect above threshold
  kExitValidation = 2,
  kExitNoConvergence = 3,
  kExitSampling = 4,
};

/// Entry point of the `cbary` tool with injectable streams (stdin is `in`
/// unless --input is given; results go to `out` unless --output is given).
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace cbary
