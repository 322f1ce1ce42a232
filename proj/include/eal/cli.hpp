#pragma once

#include <string>
#include <vector>

namespace eal {

// Full command-line surface ("eal <subcommand> ...").  `args` excludes the
// program name.  Returns the process exit code: 0 success, 2 usage or
// validation error, 1 runtime failure.
int run_cli(std::vector<std::string> args);

}  // namespace eal
