#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "conformal/cli/config.hpp"

namespace conformal::cli {

// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitNumericError = 4;

// Runs one experiment and writes manifest.json, metrics.json, the
// intervals file (csv or json per cfg.format), and plotdata.csv into
// cfg.out.  Every file write is atomic.  Throws ConfigError /
// DataError / std::exception for the three failure classes.
void run_experiment(const ExperimentConfig& cfg);

// Full command-line entry point: subcommand per method plus
// `validate`; --config PATH, --seed, --out, --format overrides.
// Returns the process exit code and prints a machine-readable error
// object to stderr on failure.
[[nodiscard]] int run_cli(int argc, const char* const* argv);

}  // namespace conformal::cli
