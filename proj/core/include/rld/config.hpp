#pragma once

#include <filesystem>
#include <string>

#include "rld/circuit.hpp"

namespace rld {

/// Step-size and event-location knobs shared by every command. Concrete
/// integration windows (IntegrationConfig) are derived per command from the
/// cycle counts below, with h = T / steps_per_cycle.
struct IntegrationSettings {
    int steps_per_cycle = 1000;
    double event_tolerance_fraction = 1e-6; ///< of h
    int max_event_iterations = 60;

    friend bool operator==(const IntegrationSettings&,
                           const IntegrationSettings&) = default;
};

/// Stroboscopic classification knobs (sweep and model comparison).
struct AnalysisSettings {
    int transient_cycles = 200;
    int record_cycles = 256;
    double epsilon = 1e-3; ///< recurrence tolerance, relative to section diameter
    int max_period = 16;

    friend bool operator==(const AnalysisSettings&, const AnalysisSettings&) = default;
};

/// Series generation and estimation knobs for the Lyapunov pipeline.
struct ChaosSettings {
    int transient_cycles = 512;
    int record_cycles = 512;
    int samples_per_cycle = 40; ///< must divide steps_per_cycle
    int bins = 64;              ///< mutual-information histogram
    int max_delay = 100;        ///< AMI scan range, samples
    int m_max = 8;              ///< embedding dimensions tried
    double r_tol = 15.0;
    double a_tol = 2.0;
    double fnn_threshold = 0.05; ///< first m below this wins
    int fnn_max_points = 8192;   ///< cap on the O(N^2) neighbor search
    int theiler_window = 0;      ///< 0 = automatic (delay * dimension)
    int follow_steps = 3;
    double replace_threshold = 0.1;
    double min_separation = 1e-9;

    friend bool operator==(const ChaosSettings&, const ChaosSettings&) = default;
};

struct OutputSettings {
    std::string directory = ".";
    bool svg = true;

    friend bool operator==(const OutputSettings&, const OutputSettings&) = default;
};

/// Fully resolved run configuration: the circuit, numerical settings, and
/// output policy for one command invocation. Missing keys in a config file
/// keep these defaults; the reference setup is the default circuit.
struct RunConfig {
    CircuitParams circuit;
    IntegrationSettings integration;
    AnalysisSettings analysis;
    ChaosSettings chaoskit;
    ExpDiodeParams exponential;
    OutputSettings output;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ValidationError naming the violated constraint, including
/// cross-field ones (sample stride divisibility, classification length).
void validate(const RunConfig& cfg);

/// Parses a flat INI-style document: `[section]` headers, `key = value`
/// lines, `#` comments. Unknown sections or keys are rejected with their
/// line number; missing keys keep defaults. The result is validated.
[[nodiscard]] RunConfig parse_config(const std::string& text);

/// Reads and parses a config file. Throws IoError if unreadable.
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Serializes every setting in a fixed order such that
/// parse_config(echo_config(cfg)) == cfg exactly (doubles via %.17g).
[[nodiscard]] std::string echo_config(const RunConfig& cfg);

} // namespace rld
