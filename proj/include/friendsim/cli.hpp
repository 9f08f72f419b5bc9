#pragma once

#include <iosfwd>

namespace friendsim::cli {

/// Process exit statuses.
enum ExitCode : int {
    kOk = 0,
    kParseFailure = 1,
    kStepFailure = 2,
    kContradiction = 3,
    kUsage = 64,
};

/// Entry point of the `friendsim` tool. Results go to `out`, diagnostics to
/// `err`; nothing but the requested document is written to `out` in JSON mode.
int main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace friendsim::cli
