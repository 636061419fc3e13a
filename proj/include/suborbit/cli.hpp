#pragma once

#include <optional>
#include <string>
#include <vector>

namespace suborbit::cli {

/// Exit codes: 0 success / feasible, 2 certified negative / infeasible,
/// 1 error (the output is then an error document).
struct CommandResult {
    int exit_code = 0;
    std::string output;       // primary document, deterministic
    std::string diagnostics;  // human-readable notes; empty under --quiet
    std::optional<std::string> output_path;
};

/// Runs one subcommand; `args` excludes the program name. Never throws.
CommandResult dispatch(const std::vector<std::string>& args);

}  // namespace suborbit::cli
