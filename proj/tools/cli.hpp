#pragma once

#include <iosfwd>

namespace sst::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitDomain = 4,
};

// Runs one command line. On success a one-line JSON summary goes to out; on
// failure a one-line JSON error record goes to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sst::cli
