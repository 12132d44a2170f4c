#pragma once

#include <iosfwd>

namespace hoconc {

enum ExitStatus : int {
  kExitNoBug = 0,
  kExitBug = 1,
  kExitUsage = 2,
  kExitEnvironment = 3,
};

/// Entry point of the `hoconc` command: `hoconc test FILE [flags]` and
/// `hoconc corpus DIR [flags]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hoconc
