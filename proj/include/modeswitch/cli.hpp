#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modeswitch {

// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Environment variable that replaces the default seed (42).
inline constexpr const char* kSeedEnv = "MODESWITCH_SEED";

// Runs one command line (without the program name). Progress summaries go
// to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace modeswitch
