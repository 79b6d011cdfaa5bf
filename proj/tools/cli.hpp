#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qlear::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kNumericError = 3,
};

/// Runs `qlear <args...>` (args excludes the program name). Normal output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qlear::cli
