#pragma once

#include <string>
#include <vector>

namespace spin7lab::cli {

/// Dispatches one subcommand (args[0] = subcommand name, rest = flags).
/// Returns the process exit code: 0 success, 1 verification failure,
/// 2 usage/config error, 3 numerical non-convergence.
int run_command(const std::vector<std::string>& args);

/// Usage text for --help and bad invocations.
std::string usage_text();

}  // namespace spin7lab::cli
