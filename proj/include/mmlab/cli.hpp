#pragma once

#include <string>
#include <vector>

namespace mmlab::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitUsage = 2;

// Parses argv (argv[0] is the program name), runs one subcommand and maps
// failures to exit codes: 2 for usage, input and configuration errors, 1 for
// numerical failures. Diagnostics go to stderr.
int run_command(int argc, char** argv);
int run_command(const std::vector<std::string>& args);

}  // namespace mmlab::cli
