#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace annulus::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInvalidInput = 2,
  kInvariantViolation = 3,
  kNumericalFailure = 4,
};

// Runs one command line (without the program name). Results go to `out` unless
// --out is given; diagnostics go to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace annulus::cli
