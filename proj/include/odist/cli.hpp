#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace odist {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

/// Runs one CLI invocation; `args` excludes the program name. Returns 0 on
/// success, 1 when a repro check fails (or on an internal error), 2 on a
/// usage or schema error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace odist
