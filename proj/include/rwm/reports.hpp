#pragma once

// Report commands behind the `rwm` CLI. Each writes its files into the output
// directory and a short human-readable summary to `log`.
//
// Exit codes: 0 ok, 2 configuration or invalid input, 3 oracle mismatch,
// 4 range or depth error, 1 anything else.

#include "rwm/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace rwm {

struct OracleMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommandOptions {
    std::filesystem::path out_dir = "rwm-out";
    bool force = false; // allow a brute-force depth below the auto rule
};

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config = 2,
    exit_oracle = 3,
    exit_range = 4,
};

// Each command throws on failure; run_command maps exceptions to exit codes.
void cmd_growth(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
void cmd_tower(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
void cmd_renewal(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
void cmd_product(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);
void cmd_all(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log);

/// Runs growth|tower|renewal|product|all; errors are reported on `err`.
int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opts,
                std::ostream& log, std::ostream& err);

} // namespace rwm
