#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cmpkit::cli {

/// Exit statuses of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. `args` excludes the program name. Output is written
/// to `out` only on success; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cmpkit::cli
