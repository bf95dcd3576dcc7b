#pragma once

#include "wlab/config.hpp"

namespace wlab {

// Exit codes of the batch runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBreakdown = 1;  // evolve only; informational
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitIo = 4;

// Executes the configured command, writing every artifact (CSV series,
// snapshots, SVG plots and the run manifest) under cfg.output_dir.
int run(const RunConfig& cfg);

}  // namespace wlab
