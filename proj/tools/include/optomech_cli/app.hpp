#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optomech::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitUsage = 64;

/// Dispatches `args` (without the program name) to one subcommand.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optomech::cli
