/// @file studies.hpp
/// @brief Scenario drivers: each named study resolves its configuration,
///        runs the corresponding solver, and writes deterministic artifacts
///        (manifest, CSV time series, JSON reports, snapshots) into the
///        output directory.
#pragma once

#include <string>

#include "iwbl/io.hpp"

namespace iwbl {

inline constexpr const char* kVersion = "1.0.0";

/// Recognized values of the `study` config key.
///   linear-bulk   bulk propagator run: energies, invariants, wall traces
///                 measured vs predicted
///   scaling-sweep fitted trace-magnitude exponents over an epsilon list
///   linear-bl     half-line boundary-layer run: energy, compatibility,
///                 boundary-term identity report
///   iota-approx   lid-domain boundary-layer run
///   iota-sweep    lid-domain truncation self-convergence over an L_eta list
///   nonlinear-bl  Picard solve plus full nonlinear residual series
///   picard        Picard solve, contraction report only
///   norms         analytic norms of the initial data and the tau schedule
///   inequalities  brute-force scans of the four weight inequalities
///
/// The output directory is `output.dir` (default: the study name), resolved
/// against $IWBL_OUTPUT_ROOT when relative and the variable is set.
/// Throws ConfigError (2), DivergedError (3) or IoError (4).
void run_study(const Config& cfg);

/// Resolved output directory for a config (exposed for the CLI's messages).
std::string resolve_output_dir(const Config& cfg);

}  // namespace iwbl
