#pragma once

#include <iosfwd>

namespace symcap::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNotConverged = 2,
  kInfiniteSuspected = 3,
  kVerifyFailed = 4,
};

/// Runs one `symcap` command line. Human-readable output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace symcap::cli
