#include "rld/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "rld/errors.hpp"

namespace rld {

std::string PeriodClass::label() const {
    return is_periodic() ? "P" + std::to_string(period) : "APERIODIC";
}

StroboscopicSection stroboscopic_section(const Trajectory& traj,
                                         const CircuitParams& params,
                                         int transient_cycles) {
    if (transient_cycles < 0)
        throw ValidationError("transient_cycles must be >= 0");
    if (traj.states.empty() || traj.dt <= 0.0)
        throw ValidationError("stroboscopic_section: empty trajectory");
    const double period = params.period();
    const double ratio = period / traj.dt;
    const long per_cycle = std::lround(ratio);
    if (per_cycle < 1 || std::abs(ratio - static_cast<double>(per_cycle)) > 1e-6)
        throw ValidationError("stroboscopic_section: trajectory grid is not "
                              "aligned to the drive period");
    const long total_cycles =
        static_cast<long>((traj.states.size() - 1) / static_cast<std::size_t>(per_cycle));
    const long required = static_cast<long>(transient_cycles) + 16;
    if (total_cycles < required)
        throw ValidationError("stroboscopic_section: trajectory spans " +
                              std::to_string(total_cycles) + " cycles but " +
                              std::to_string(required) + " are required "
                              "(transient_cycles + 16)");

    StroboscopicSection section;
    section.drive_period = period;
    section.transient_cycles = transient_cycles;
    section.points.reserve(static_cast<std::size_t>(total_cycles - transient_cycles));
    for (long n = transient_cycles + 1; n <= total_cycles; ++n)
        section.points.push_back(
            traj.states[static_cast<std::size_t>(n * per_cycle)]);
    return section;
}

namespace {

double distance(const State& a, const State& b) {
    return std::hypot(a.charge - b.charge, a.current - b.current);
}

} // namespace

PeriodClass classify_period(const StroboscopicSection& section, double epsilon,
                            int max_period) {
    if (max_period < 1) throw ValidationError("max_period must be >= 1");
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
    const auto& pts = section.points;
    if (pts.size() < static_cast<std::size_t>(4 * max_period))
        throw ValidationError("classify_period: needs at least 4 * max_period "
                              "points, got " + std::to_string(pts.size()));

    double diameter = 0.0;
    double scale = 0.0;
    for (std::size_t a = 0; a < pts.size(); ++a) {
        scale = std::max(scale, std::hypot(pts[a].charge, pts[a].current));
        for (std::size_t b = a + 1; b < pts.size(); ++b)
            diameter = std::max(diameter, distance(pts[a], pts[b]));
    }
    // Collapse floor: a section spread at the solver noise level is a single
    // fixed point. Implicit steps converge to ~1e-11 relative, so the floor
    // sits above that and far below any genuine period-doubling split.
    if (diameter <= 1e-9 * scale) return PeriodClass{1};

    const double tol = epsilon * diameter;
    for (int k = 1; k <= max_period; ++k) {
        bool recurs = true;
        for (std::size_t n = 0; n + static_cast<std::size_t>(k) < pts.size(); ++n) {
            if (distance(pts[n + static_cast<std::size_t>(k)], pts[n]) > tol) {
                recurs = false;
                break;
            }
        }
        if (recurs) return PeriodClass{k};
    }
    return PeriodClass{0};
}

BifurcationDiagram bifurcation_sweep(const CircuitParams& base, double e_min,
                                     double e_max, int steps,
                                     const IntegrationConfig& cfg,
                                     int transient_cycles, int record_cycles,
                                     int jobs, double epsilon, int max_period) {
    if (!(e_min < e_max)) throw ValidationError("e_min must be below e_max");
    if (steps < 2) throw ValidationError("sweep needs at least 2 steps");
    if (record_cycles < 16) throw ValidationError("record_cycles must be >= 16");
    if (jobs < 1) throw ValidationError("jobs must be >= 1");
    const double span_needed =
        (static_cast<double>(transient_cycles) + record_cycles) * base.period();
    if (cfg.t_end - cfg.t_start < span_needed * (1.0 - 1e-12))
        throw ValidationError("bifurcation_sweep: integration window shorter than "
                              "transient_cycles + record_cycles drive periods");

    BifurcationDiagram diagram;
    diagram.amplitudes.resize(static_cast<std::size_t>(steps));
    diagram.sections.resize(static_cast<std::size_t>(steps));
    diagram.classes.resize(static_cast<std::size_t>(steps));
    diagram.failed.assign(static_cast<std::size_t>(steps), 0);
    diagram.errors.resize(static_cast<std::size_t>(steps));
    for (int j = 0; j < steps; ++j)
        diagram.amplitudes[static_cast<std::size_t>(j)] =
            e_min + (e_max - e_min) * j / (steps - 1);

    const auto run_one = [&](std::size_t j) {
        CircuitParams params = base;
        params.drive_amplitude = diagram.amplitudes[j];
        try {
            const Trajectory traj =
                integrate(params, State{params.charge_offset, 0.0}, cfg);
            const StroboscopicSection section =
                stroboscopic_section(traj, params, transient_cycles);
            diagram.classes[j] = classify_period(section, epsilon, max_period);
            auto& vr = diagram.sections[j];
            vr.reserve(section.points.size());
            for (const State& s : section.points)
                vr.push_back(resistor_voltage(s, params));
        } catch (const std::exception& e) {
            diagram.failed[j] = 1;
            diagram.errors[j] = e.what();
        }
    };

    if (jobs == 1) {
        for (int j = 0; j < steps; ++j) run_one(static_cast<std::size_t>(j));
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int workers = std::min(jobs, steps);
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t j = next.fetch_add(1);
                     j < static_cast<std::size_t>(steps); j = next.fetch_add(1))
                    run_one(j);
            });
        for (auto& th : pool) th.join();
    }
    return diagram;
}

std::vector<std::pair<double, double>> portrait(const Trajectory& traj,
                                                const CircuitParams& params,
                                                std::size_t skip_samples) {
    std::vector<std::pair<double, double>> pairs;
    if (skip_samples >= traj.states.size()) return pairs;
    pairs.reserve(traj.states.size() - skip_samples);
    for (std::size_t n = skip_samples; n < traj.states.size(); ++n) {
        const double t = traj.t0 + static_cast<double>(n) * traj.dt;
        pairs.emplace_back(drive_voltage(t, params),
                           resistor_voltage(traj.states[n], params));
    }
    return pairs;
}

} // namespace rld
