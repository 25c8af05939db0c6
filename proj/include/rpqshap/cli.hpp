#pragma once

#include <iosfwd>

namespace rpqshap::cli {

/// Exit statuses shared by every command.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kInvalidInput = 2,
    kOverflow = 3,
    kInfiniteLanguage = 4,
    kBudget = 5,
};

/// Entry point of the `rpqshap` tool, with output streams injected so tests
/// can capture them.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rpqshap::cli
