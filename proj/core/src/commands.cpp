#include "rld/commands.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rld/analysis.hpp"
#include "rld/chaoskit.hpp"
#include "rld/csv.hpp"
#include "rld/errors.hpp"
#include "rld/integrate.hpp"
#include "rld/svg.hpp"

namespace rld {

namespace {

namespace fs = std::filesystem;

void write_echo(const RunConfig& cfg) {
    io::write_text_file(fs::path(cfg.output.directory) / "resolved.cfg",
                        echo_config(cfg));
}

IntegrationConfig window(const RunConfig& cfg, int cycles) {
    return build_integration_config(cfg.circuit, cycles,
                                    cfg.integration.steps_per_cycle,
                                    cfg.integration.event_tolerance_fraction,
                                    cfg.integration.max_event_iterations);
}

/// Shifts a window built at t = 0 to start where `prefix` ended.
IntegrationConfig after(IntegrationConfig w, const IntegrationConfig& prefix) {
    w.t_start += prefix.t_end;
    w.t_end += prefix.t_end;
    return w;
}

/// Transient-then-record run of the piecewise-linear model from rest;
/// returns only the recorded part.
Trajectory settled_trajectory(const RunConfig& cfg, int transient_cycles,
                              int record_cycles) {
    const State x0{cfg.circuit.charge_offset, 0.0};
    if (transient_cycles == 0) return integrate(cfg.circuit, x0, window(cfg, record_cycles));
    const IntegrationConfig head = window(cfg, transient_cycles);
    const Trajectory settle = integrate(cfg.circuit, x0, head);
    return integrate(cfg.circuit, settle.states.back(),
                     after(window(cfg, record_cycles), head));
}

std::string class_or_error(const BifurcationDiagram& diagram, std::size_t j) {
    return diagram.failed[j] ? "ERROR" : diagram.classes[j].label();
}

/// Mirrors stroboscopic_section's indexing for the one-dimensional
/// exponential-model trajectory: i at t0 + n*T for n = 1..cycles.
StroboscopicSection scalar_section(const ScalarTrajectory& traj,
                                   const CircuitParams& params) {
    const double period = params.period();
    const auto per_cycle = static_cast<std::size_t>(std::lround(period / traj.dt));
    if (per_cycle == 0)
        throw ValidationError("section: grid coarser than the drive period");
    StroboscopicSection section;
    section.drive_period = period;
    section.transient_cycles = 0;
    const std::size_t cycles = (traj.values.size() - 1) / per_cycle;
    for (std::size_t n = 1; n <= cycles; ++n)
        section.points.push_back(State{0.0, traj.values[n * per_cycle]});
    return section;
}

} // namespace

CommandResult cmd_simulate(const RunConfig& cfg) {
    validate(cfg);
    write_echo(cfg);
    const Trajectory traj = settled_trajectory(cfg, cfg.analysis.transient_cycles,
                                               cfg.analysis.record_cycles);
    const fs::path dir = cfg.output.directory;

    io::CsvTable ts;
    ts.header = {"t_s", "q_C", "i_A", "v_r_V", "region"};
    ts.units = {"s", "C", "A", "V", "-"};
    ts.rows.reserve(traj.states.size());
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        const State& x = traj.states[n];
        const double t = traj.t0 + static_cast<double>(n) * traj.dt;
        ts.rows.push_back({io::format_double(t), io::format_double(x.charge),
                           io::format_double(x.current),
                           io::format_double(resistor_voltage(x, cfg.circuit)),
                           std::to_string(static_cast<int>(region_of(x, cfg.circuit)))});
    }
    io::write_csv(dir / "timeseries.csv", ts);

    const auto pairs = portrait(traj, cfg.circuit);
    io::CsvTable pt;
    pt.header = {"v_in_V", "v_r_V"};
    pt.units = {"V", "V"};
    pt.rows.reserve(pairs.size());
    for (const auto& [vin, vr] : pairs)
        pt.rows.push_back({io::format_double(vin), io::format_double(vr)});
    io::write_csv(dir / "portrait.csv", pt);

    if (cfg.output.svg) {
        io::Plot plot;
        plot.title = "Resistor voltage";
        plot.x_label = "t [s]";
        plot.y_label = "v_R [V]";
        io::PlotSeries line;
        line.x.reserve(traj.states.size());
        line.y.reserve(traj.states.size());
        for (std::size_t n = 0; n < traj.states.size(); ++n) {
            line.x.push_back(traj.t0 + static_cast<double>(n) * traj.dt);
            line.y.push_back(resistor_voltage(traj.states[n], cfg.circuit));
        }
        plot.series.push_back(std::move(line));
        io::write_svg(dir / "timeseries.svg", plot);
    }

    return CommandResult{true, "simulate: " + std::to_string(traj.states.size()) +
                                   " samples, " +
                                   std::to_string(traj.switch_times.size()) +
                                   " region switches"};
}

CommandResult cmd_sweep(const RunConfig& cfg, double e_min, double e_max, int steps,
                        int jobs) {
    validate(cfg);
    write_echo(cfg);
    const IntegrationConfig w =
        window(cfg, cfg.analysis.transient_cycles + cfg.analysis.record_cycles);
    const BifurcationDiagram diagram = bifurcation_sweep(
        cfg.circuit, e_min, e_max, steps, w, cfg.analysis.transient_cycles,
        cfg.analysis.record_cycles, jobs, cfg.analysis.epsilon,
        cfg.analysis.max_period);
    const fs::path dir = cfg.output.directory;

    io::CsvTable bif;
    bif.header = {"E_V", "v_r_section_V"};
    bif.units = {"V", "V"};
    for (std::size_t j = 0; j < diagram.amplitudes.size(); ++j) {
        const std::string e = io::format_double(diagram.amplitudes[j]);
        for (double v : diagram.sections[j])
            bif.rows.push_back({e, io::format_double(v)});
    }
    io::write_csv(dir / "bifurcation.csv", bif);

    io::CsvTable cls;
    cls.header = {"E_V", "class"};
    cls.units = {"V", "-"};
    std::size_t failures = 0;
    for (std::size_t j = 0; j < diagram.amplitudes.size(); ++j) {
        failures += diagram.failed[j];
        cls.rows.push_back(
            {io::format_double(diagram.amplitudes[j]), class_or_error(diagram, j)});
    }
    io::write_csv(dir / "classes.csv", cls);

    if (cfg.output.svg) {
        io::Plot plot;
        plot.title = "Bifurcation diagram";
        plot.x_label = "E [V]";
        plot.y_label = "v_R at section [V]";
        io::PlotSeries dots;
        dots.dots = true;
        dots.dot_radius = 0.8;
        for (std::size_t j = 0; j < diagram.amplitudes.size(); ++j)
            for (double v : diagram.sections[j]) {
                dots.x.push_back(diagram.amplitudes[j]);
                dots.y.push_back(v);
            }
        plot.series.push_back(std::move(dots));
        io::write_svg(dir / "bifurcation.svg", plot);
    }

    const std::size_t total = diagram.amplitudes.size();
    const bool ok = 10 * (total - failures) >= 9 * total;
    std::string summary = "sweep: " + std::to_string(total) + " amplitudes, " +
                          std::to_string(failures) + " failures";
    for (std::size_t j = 0; j < total; ++j)
        if (diagram.failed[j])
            summary += "\n  E = " + io::format_double(diagram.amplitudes[j]) + ": " +
                       diagram.errors[j];
    return CommandResult{ok, summary};
}

CommandResult cmd_lyapunov(const RunConfig& cfg,
                           const std::optional<std::filesystem::path>& input,
                           int jobs) {
    validate(cfg);
    write_echo(cfg);
    const auto& ck = cfg.chaoskit;

    ScalarSeries series;
    if (input) {
        series.dt = 1.0; // sample units; no time base in a value-only file
        series.values = io::numeric_column(io::read_csv(*input));
    } else {
        const Trajectory traj =
            settled_trajectory(cfg, ck.transient_cycles, ck.record_cycles);
        const std::size_t stride = static_cast<std::size_t>(
            cfg.integration.steps_per_cycle / ck.samples_per_cycle);
        series.dt = traj.dt * static_cast<double>(stride);
        series.values.reserve(traj.states.size() / stride + 1);
        for (std::size_t n = 0; n < traj.states.size(); n += stride)
            series.values.push_back(resistor_voltage(traj.states[n], cfg.circuit));
    }

    const ScalarSeries z = zscored(series);
    const auto ami = average_mutual_information(z, ck.max_delay, ck.bins);
    const DelayChoice delay = first_minimum(ami);

    const auto fnn = false_nearest_neighbors(
        z, delay.delay, ck.m_max, ck.r_tol, ck.a_tol,
        static_cast<std::size_t>(ck.fnn_max_points), jobs);
    int dimension = 0;
    for (const auto& p : fnn)
        if (p.fraction < ck.fnn_threshold) {
            dimension = p.dimension;
            break;
        }
    const bool fnn_saturated = dimension == 0;
    if (fnn_saturated) dimension = ck.m_max;

    const int theiler =
        ck.theiler_window > 0 ? ck.theiler_window : delay.delay * dimension;
    const LyapunovReport report =
        max_lyapunov(z, EmbeddingSpec{delay.delay, dimension}, theiler,
                     ck.follow_steps, ck.replace_threshold, ck.min_separation);

    const fs::path dir = cfg.output.directory;
    io::CsvTable ly;
    ly.header = {"tau", "m", "lambda_per_s", "lambda_per_drive_period",
                 "replacements"};
    ly.units = {"samples", "-", "1/s", "-", "-"};
    ly.rows.push_back({std::to_string(delay.delay), std::to_string(dimension),
                       io::format_double(report.exponent),
                       io::format_double(report.exponent * cfg.circuit.period()),
                       std::to_string(report.replacement_count)});
    io::write_csv(dir / "lyapunov.csv", ly);

    io::CsvTable dv;
    dv.header = {"interval", "t_s", "cumulative_log"};
    dv.units = {"-", "s", "-"};
    dv.rows.reserve(report.divergence.size());
    for (const auto& step : report.divergence)
        dv.rows.push_back({std::to_string(step.interval), io::format_double(step.t),
                           io::format_double(step.cumulative_log)});
    io::write_csv(dir / "divergence.csv", dv);

    std::string summary =
        "lyapunov: tau = " + std::to_string(delay.delay) +
        (delay.fallback ? " (no interior AMI minimum, argmin fallback)" : "") +
        ", m = " + std::to_string(dimension) +
        (fnn_saturated ? " (FNN never dropped below threshold)" : "") +
        ", lambda = " + io::format_double(report.exponent) + " 1/s (" +
        io::format_double(report.exponent * cfg.circuit.period()) +
        " per drive period), " + std::to_string(report.replacement_count) +
        " replacements";
    return CommandResult{true, std::move(summary)};
}

CommandResult cmd_compare_exponential(const RunConfig& cfg) {
    validate(cfg);
    write_echo(cfg);
    const int transient = cfg.analysis.transient_cycles;
    const int record = cfg.analysis.record_cycles;

    const Trajectory pwl = settled_trajectory(cfg, transient, record);

    const IntegrationConfig head = window(cfg, transient);
    ScalarTrajectory exp_traj;
    if (transient == 0) {
        exp_traj = integrate_exponential(cfg.circuit, cfg.exponential, 0.0,
                                         window(cfg, record));
    } else {
        const ScalarTrajectory settle =
            integrate_exponential(cfg.circuit, cfg.exponential, 0.0, head);
        exp_traj = integrate_exponential(cfg.circuit, cfg.exponential,
                                         settle.values.back(),
                                         after(window(cfg, record), head));
    }

    const fs::path dir = cfg.output.directory;
    io::CsvTable et;
    et.header = {"t_s", "i_A", "v_r_V"};
    et.units = {"s", "A", "V"};
    et.rows.reserve(exp_traj.values.size());
    for (std::size_t n = 0; n < exp_traj.values.size(); ++n) {
        const double t = exp_traj.t0 + static_cast<double>(n) * exp_traj.dt;
        et.rows.push_back({io::format_double(t), io::format_double(exp_traj.values[n]),
                           io::format_double(cfg.circuit.resistance *
                                             exp_traj.values[n])});
    }
    io::write_csv(dir / "exp_timeseries.csv", et);

    const PeriodClass pwl_class = classify_period(
        stroboscopic_section(pwl, cfg.circuit, 0), cfg.analysis.epsilon,
        cfg.analysis.max_period);
    const PeriodClass exp_class =
        classify_period(scalar_section(exp_traj, cfg.circuit), cfg.analysis.epsilon,
                        cfg.analysis.max_period);

    io::CsvTable cmp;
    cmp.header = {"t_s", "v_r_pwl_V", "v_r_exp_V"};
    cmp.units = {"s", "V", "V"};
    if (pwl.states.size() != exp_traj.values.size())
        throw NumericalError("model grids diverged in length"); // same window, same h
    cmp.rows.reserve(pwl.states.size() + 1);
    for (std::size_t n = 0; n < pwl.states.size(); ++n) {
        const double t = pwl.t0 + static_cast<double>(n) * pwl.dt;
        cmp.rows.push_back(
            {io::format_double(t),
             io::format_double(resistor_voltage(pwl.states[n], cfg.circuit)),
             io::format_double(cfg.circuit.resistance * exp_traj.values[n])});
    }
    cmp.rows.push_back({"class", pwl_class.label(), exp_class.label()});
    io::write_csv(dir / "comparison.csv", cmp);

    return CommandResult{true, "compare-exponential: piecewise-linear " +
                                   pwl_class.label() + ", exponential " +
                                   exp_class.label()};
}

} // namespace rld
