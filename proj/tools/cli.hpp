#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaitsym::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,             // unexpected internal error
  kBadInput = 2,            // unreadable input, invalid parameters, empty manifest
  kInsufficientFrames = 3,  // sequence shorter than one segment
  kSingleClass = 4,         // manifest holds only one label
};

/// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaitsym::cli
