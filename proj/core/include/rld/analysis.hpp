#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rld/circuit.hpp"
#include "rld/integrate.hpp"

namespace rld {

/// States sampled once per drive period after a transient.
struct StroboscopicSection {
    double drive_period = 0.0; ///< T, seconds
    int transient_cycles = 0;
    std::vector<State> points; ///< one per recorded cycle, in order
};

/// Result of the recurrence test: period >= 1 for Periodic(k), 0 for
/// Aperiodic (no k <= max_period recurs within tolerance).
struct PeriodClass {
    int period = 0;

    [[nodiscard]] bool is_periodic() const { return period >= 1; }
    [[nodiscard]] std::string label() const;
};

/// Per-amplitude stroboscopic data over a drive-amplitude sweep. Parallel
/// vectors, one entry per amplitude; `failed[j]` marks amplitudes whose
/// integration threw (their sections are empty and their class meaningless),
/// with the diagnostic kept in `errors[j]`.
struct BifurcationDiagram {
    std::vector<double> amplitudes;               ///< volts, strictly increasing
    std::vector<std::vector<double>> sections;    ///< resistor voltage at section
    std::vector<PeriodClass> classes;
    std::vector<std::uint8_t> failed;
    std::vector<std::string> errors;
};

/// Extracts the state at t = t0 + n*T for n = transient_cycles+1 ... cycles.
/// Requires the trajectory grid to be period-aligned (dt dividing T) and to
/// span at least transient_cycles + 16 periods.
[[nodiscard]] StroboscopicSection stroboscopic_section(const Trajectory& traj,
                                                       const CircuitParams& params,
                                                       int transient_cycles);

/// Smallest k <= max_period with ||p[n+k] - p[n]|| <= epsilon * diameter for
/// all n, where diameter is the maximum pairwise distance of the section
/// points; Aperiodic (period 0) when no k fits. A diameter below the relative
/// scale floor (1e-9 of the largest point norm, above solver noise) means the
/// section has collapsed to one point and classifies as Periodic(1). Requires at least
/// 4 * max_period points.
[[nodiscard]] PeriodClass classify_period(const StroboscopicSection& section,
                                          double epsilon, int max_period);

/// Integrates every amplitude on the uniform [e_min, e_max] grid from the
/// fixed initial state (q0, 0), no warm-starting, and records each section's
/// resistor voltages plus its period class. Amplitudes are independent; with
/// jobs > 1 they run on that many threads, assembled back in grid order so
/// the result is identical for any job count. Per-amplitude failures are
/// recorded in the diagram and do not abort the sweep.
[[nodiscard]] BifurcationDiagram bifurcation_sweep(const CircuitParams& base,
                                                   double e_min, double e_max,
                                                   int steps,
                                                   const IntegrationConfig& cfg,
                                                   int transient_cycles,
                                                   int record_cycles, int jobs = 1,
                                                   double epsilon = 1e-3,
                                                   int max_period = 16);

/// Drive-voltage versus resistor-voltage pairs (E*w(omega t_n), R*i_n) over
/// the trajectory samples, skipping the first skip_samples of them.
[[nodiscard]] std::vector<std::pair<double, double>> portrait(
    const Trajectory& traj, const CircuitParams& params,
    std::size_t skip_samples = 0);

} // namespace rld
