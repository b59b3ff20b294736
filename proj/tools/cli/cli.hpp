#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace lglab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUnexpected = 1,
  kExitInput = 2,
  kExitIdentity = 3,
};

/// Runs one lglab invocation. `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace lglab::cli
