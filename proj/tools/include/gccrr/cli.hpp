#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gccrr {

// Exit codes of the gccrr tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;    // bad flags or configuration
inline constexpr int kExitRuntime = 2;  // data, I/O or check failure

// Runs the tool on `args` (without the program name). Results go to `out`,
// progress and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gccrr
