#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace semikrylov {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for the `semikrylov` tool. `args` excludes the program name.
/// Subcommands: solve, diagnose, verify-bounds, generate.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semikrylov
