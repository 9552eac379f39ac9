#pragma once

#include <ostream>

namespace bai::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAborted = 3;

// Entry point for the `bai` tool; subcommands gen, analyze, run, compare and
// probe. Exit codes: 0 success, 2 bad flags/config/instance, 3 every trial
// aborted on the budget cap, 1 anything else.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bai::cli
