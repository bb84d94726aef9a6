#pragma once

#include <string>
#include <vector>

namespace pgonal {

struct CliResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

/// Runs one CLI invocation. Exit codes: 0 success, 1 domain error, 2 usage
/// error, 3 when a verification run completed but contains at least one
/// mismatch or finding.
CliResult run_cli(const std::vector<std::string>& args);

} // namespace pgonal
