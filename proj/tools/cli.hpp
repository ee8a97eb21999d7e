#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bufins::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitCap = 3;
inline constexpr int kExitUsage = 64;

/// Runs the bufins command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bufins::cli
