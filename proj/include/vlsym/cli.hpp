#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vlsym {

/// Exit codes of the command line front end.
inline constexpr int kExitClean = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

/// Runs `vlsym <args...>` in-process. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vlsym
