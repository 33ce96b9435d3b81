#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace biotab {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitInternal = 3 };

/// Entry point for the `biotab` tool. Normal output goes to `out`, one-line
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biotab
