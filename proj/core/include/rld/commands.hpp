#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "rld/config.hpp"

namespace rld {

/// Outcome of one CLI command: files written under cfg.output.directory plus
/// a human-readable summary for standard output. `ok` false means the
/// command completed but its success quota failed (sweep's 90% rule).
struct CommandResult {
    bool ok = true;
    std::string summary;
};

/// Simulates the piecewise-linear model at the configured drive, discards
/// analysis.transient_cycles, records analysis.record_cycles, and writes
/// timeseries.csv, portrait.csv, and (if enabled) timeseries.svg.
CommandResult cmd_simulate(const RunConfig& cfg);

/// Amplitude sweep over [e_min, e_max] with `steps` grid points; writes
/// bifurcation.csv, classes.csv, and (if enabled) bifurcation.svg. Failed
/// amplitudes classify as ERROR; ok stays true while >= 90% succeed.
CommandResult cmd_sweep(const RunConfig& cfg, double e_min, double e_max, int steps,
                        int jobs);

/// Lyapunov pipeline: resistor-voltage series (simulated per cfg.chaoskit, or
/// read from `input`, one numeric column, dt = 1) -> z-score -> AMI delay ->
/// FNN dimension -> neighbor-tracking exponent. Writes lyapunov.csv and
/// divergence.csv.
CommandResult cmd_lyapunov(const RunConfig& cfg,
                           const std::optional<std::filesystem::path>& input,
                           int jobs);

/// Runs the piecewise-linear and exponential models at identical drive and
/// grid, classifies both, and writes exp_timeseries.csv plus comparison.csv
/// (per-sample resistor voltages and a trailing class summary row).
CommandResult cmd_compare_exponential(const RunConfig& cfg);

} // namespace rld
