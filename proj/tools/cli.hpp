#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace segsynth::cli {

enum ExitCode : int {
    kSuccess = 0,
    kGenerationFailures = 1,
    kConfigError = 2,
    kTransportError = 3,
};

/// Runs the command line. args excludes the program name. Summaries go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace segsynth::cli
