#ifndef HGTEQ_RUNNER_HPP
#define HGTEQ_RUNNER_HPP

#include <string>

#include "hgteq/config.hpp"

namespace hgteq {

// Exit codes shared by the CLI and the runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// Executes one scenario and writes its artifacts (plus config_echo.json)
// into cfg.out_dir. Reruns with an identical config produce byte-identical
// files. Throws ConfigError / NumericalError on failure.
void run_scenario(const RunConfig& cfg);

// Wrapper used by the CLI: catches errors, prints a JSON error record to
// stderr, returns the exit code.
int run_scenario_catching(const RunConfig& cfg);

} // namespace hgteq

#endif
