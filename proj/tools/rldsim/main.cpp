#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rld/commands.hpp"
#include "rld/config.hpp"
#include "rld/errors.hpp"

namespace {

enum ExitCode : int { Ok = 0, BadInput = 1, NumericalFailure = 2, IoFailure = 3 };

struct Options {
    std::string config_path;
    std::string out_dir;
    std::string input_csv;
    double e_min = 0.1;
    double e_max = 10.0;
    int steps = 200;
    int jobs = 1;
    int svg_flag = -1; // -1 keep config, 0 off, 1 on
};

rld::RunConfig resolve(const Options& opt) {
    rld::RunConfig cfg;
    if (!opt.config_path.empty()) cfg = rld::load_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.output.directory = opt.out_dir;
    if (opt.svg_flag >= 0) cfg.output.svg = opt.svg_flag == 1;
    rld::validate(cfg);
    return cfg;
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.config_path, "configuration file");
    cmd->add_option("--out", opt.out_dir, "output directory (default from config)");
    auto* on = cmd->add_flag("--svg", "emit SVG plots");
    auto* off = cmd->add_flag("--no-svg", "suppress SVG plots");
    on->excludes(off);
    cmd->callback([&opt, on, off] {
        if (on->count()) opt.svg_flag = 1;
        if (off->count()) opt.svg_flag = 0;
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven RLD circuit simulator and chaos analysis toolkit"};
    app.require_subcommand(1);
    Options opt;

    auto* simulate = app.add_subcommand("simulate", "time series at the configured drive");
    add_common(simulate, opt);

    auto* sweep = app.add_subcommand("sweep", "amplitude sweep bifurcation diagram");
    add_common(sweep, opt);
    sweep->add_option("--e-min", opt.e_min, "lowest amplitude, volts");
    sweep->add_option("--e-max", opt.e_max, "highest amplitude, volts");
    sweep->add_option("--steps", opt.steps, "grid points");
    sweep->add_option("--jobs", opt.jobs, "worker threads");

    auto* lyapunov = app.add_subcommand("lyapunov", "largest Lyapunov exponent");
    add_common(lyapunov, opt);
    lyapunov->add_option("--input", opt.input_csv,
                         "analyze this single-column CSV instead of simulating");
    lyapunov->add_option("--jobs", opt.jobs, "worker threads");

    auto* compare = app.add_subcommand("compare-exponential",
                                       "piecewise-linear versus exponential diode");
    add_common(compare, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        rld::CommandResult result;
        if (simulate->parsed()) {
            result = rld::cmd_simulate(resolve(opt));
        } else if (sweep->parsed()) {
            result = rld::cmd_sweep(resolve(opt), opt.e_min, opt.e_max, opt.steps,
                                    opt.jobs);
        } else if (lyapunov->parsed()) {
            std::optional<std::filesystem::path> input;
            if (!opt.input_csv.empty()) input = opt.input_csv;
            result = rld::cmd_lyapunov(resolve(opt), input, opt.jobs);
        } else {
            result = rld::cmd_compare_exponential(resolve(opt));
        }
        std::puts(result.summary.c_str());
        if (!result.ok) {
            std::fputs("error: success quota not met\n", stderr);
            return NumericalFailure;
        }
        return Ok;
    } catch (const rld::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return BadInput;
    } catch (const rld::NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return NumericalFailure;
    } catch (const rld::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return IoFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return NumericalFailure;
    }
}
