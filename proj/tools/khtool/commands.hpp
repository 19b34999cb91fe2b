#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace khtool {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitResourceLimit = 3,
};

/// Entry point of `khtool`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a braid word such as "1 -2 1" or "1,-2,1".
std::vector<int> parse_braid_word(const std::string& text);

}  // namespace khtool
