#pragma once

// Command line front end.  Subcommands: kernel, lambda, solve, green, oblique,
// verify-bound, appendix, sweep, intervals.  Exit codes: 0 success,
// 1 validation error (bad flags, missing files, violated preconditions),
// 2 numerical failure (unstable fit, failed cross-check, unreliable estimate).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wedge/kvconfig.hpp"

namespace wedge::cli {

/// Resolved options of one invocation.  Referenced files enter through their
/// canonical contents, so the hash changes when a file does.
struct ExperimentConfig {
    std::string command;
    KeyValueConfig options;
    std::uint64_t seed = 1;

    [[nodiscard]] std::string hash() const;
    /// "# config_hash=<hex> seed=<seed>"
    [[nodiscard]] std::string header() const;
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace wedge::cli
