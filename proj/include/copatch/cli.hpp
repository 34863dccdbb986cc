#ifndef COPATCH_CLI_HPP
#define COPATCH_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace copatch {

/// Runs one copatch command against the working tree at `root`.
///
/// Commands: init, record -m <msg>, state, checkout [--markers],
/// merge <path>, resolve, log, check. The tracked file defaults to FILE
/// and can be overridden with the COPATCH_FILE environment variable.
///
/// Exit codes: 0 success (and linear state where that applies), 1
/// conflicted state or refused operation, 2 usage error, 3 store
/// corruption or unavailable store. Failures print one machine-readable
/// line on `err` prefixed `error:`.
int run_cli(const std::vector<std::string>& args, const std::filesystem::path& root,
            std::ostream& out, std::ostream& err);

} // namespace copatch

#endif
