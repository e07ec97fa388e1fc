#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "rld/config.hpp"
#include "rld/csv.hpp"
#include "rld/errors.hpp"
#include "rld/svg.hpp"

using namespace rld;
namespace fs = std::filesystem;

namespace {

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

RunConfig mutated_config() {
    RunConfig cfg;
    cfg.circuit.resistance = 12.5;
    cfg.circuit.inductance = 2e-3;
    cfg.circuit.drive_amplitude = 2.718281828459045;
    cfg.circuit.drive_frequency = 5e4;
    cfg.circuit.drive_waveform = Waveform::Sine;
    cfg.circuit.threshold_voltage = 0.65;
    cfg.circuit.charge_offset = -1.25e-10;
    cfg.circuit.cap_region1 = 3.1e-9;
    cfg.circuit.cap_region2 = 4.7e-7;
    cfg.circuit.cond_region1 = 1e-4;
    cfg.circuit.cond_region2 = 0.125;
    cfg.circuit.threshold_mode = ThresholdMode::ForwardOnly;
    cfg.integration.steps_per_cycle = 500;
    cfg.integration.event_tolerance_fraction = 1e-7;
    cfg.integration.max_event_iterations = 40;
    cfg.analysis.transient_cycles = 64;
    cfg.analysis.record_cycles = 80;
    cfg.analysis.epsilon = 5e-4;
    cfg.analysis.max_period = 8;
    cfg.chaoskit.transient_cycles = 128;
    cfg.chaoskit.record_cycles = 96;
    cfg.chaoskit.samples_per_cycle = 50;
    cfg.chaoskit.bins = 48;
    cfg.chaoskit.max_delay = 90;
    cfg.chaoskit.m_max = 6;
    cfg.chaoskit.r_tol = 12.0;
    cfg.chaoskit.a_tol = 2.5;
    cfg.chaoskit.fnn_threshold = 0.04;
    cfg.chaoskit.fnn_max_points = 4096;
    cfg.chaoskit.theiler_window = 24;
    cfg.chaoskit.follow_steps = 2;
    cfg.chaoskit.replace_threshold = 0.08;
    cfg.chaoskit.min_separation = 1e-8;
    cfg.exponential.saturation_current = 2e-9;
    cfg.exponential.emission_coefficient = 1.9;
    cfg.exponential.thermal_voltage = 0.026;
    cfg.output.directory = "out";
    cfg.output.svg = false;
    return cfg;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "rldsim_io_test";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("an empty document yields the default configuration") {
    CHECK(parse_config("") == RunConfig{});
    CHECK(parse_config("# only a comment\n\n") == RunConfig{});
}

TEST_CASE("echo round-trips every field exactly") {
    const RunConfig defaults;
    CHECK(parse_config(echo_config(defaults)) == defaults);

    const RunConfig cfg = mutated_config();
    const std::string echoed = echo_config(cfg);
    CHECK(parse_config(echoed) == cfg);
    CHECK(echo_config(parse_config(echoed)) == echoed);
}

TEST_CASE("parsing accepts comments, blank lines, and whitespace") {
    const std::string text = "# circuit under test\n"
                             "\n"
                             "[circuit]\n"
                             "  resistance   =   47.0\n"
                             "\n"
                             "# tail note\n";
    const RunConfig cfg = parse_config(text);
    CHECK(cfg.circuit.resistance == 47.0);
    CHECK(cfg.circuit.inductance == RunConfig{}.circuit.inductance);
}

TEST_CASE("unknown keys and sections are rejected with their line") {
    CHECK_THROWS_WITH_AS((void)parse_config("[circuit]\nresistnce = 5\n"),
                         doctest::Contains("line 2"), ValidationError);
    CHECK_THROWS_WITH_AS((void)parse_config("[circiut]\n"),
                         doctest::Contains("line 1"), ValidationError);
    CHECK_THROWS_WITH_AS((void)parse_config("[circuit]\nresistnce = 5\n"),
                         doctest::Contains("resistnce"), ValidationError);
    CHECK_THROWS_AS((void)parse_config("resistance = 5\n"), ValidationError);
    CHECK_THROWS_AS((void)parse_config("[circuit]\nresistance\n"), ValidationError);
    CHECK_THROWS_AS((void)parse_config("[circuit]\ndrive_waveform = square\n"),
                    ValidationError);
}

TEST_CASE("validation names the offending key") {
    CHECK_THROWS_WITH_AS((void)parse_config("[circuit]\nresistance = -5\n"),
                         doctest::Contains("resistance"), ValidationError);
    CHECK_THROWS_AS((void)parse_config("[integration]\nsteps_per_cycle = 7\n"),
                    ValidationError);
    CHECK_THROWS_AS((void)parse_config("[chaoskit]\nsamples_per_cycle = 37\n"),
                    ValidationError); // must divide steps_per_cycle
    CHECK_THROWS_AS(
        (void)parse_config("[chaoskit]\nmin_separation = 0.5\n"),
        ValidationError); // must stay below replace_threshold
    CHECK_THROWS_AS((void)parse_config("[analysis]\nrecord_cycles = 20\n"),
                    ValidationError); // < 4 * max_period
}

TEST_CASE("load_config reads files and reports missing ones") {
    const fs::path dir = scratch_dir();
    const fs::path path = dir / "run.cfg";
    io::write_text_file(path, "[circuit]\ndrive_amplitude = 4.25\n");
    CHECK(load_config(path).circuit.drive_amplitude == 4.25);
    CHECK_THROWS_AS((void)load_config(dir / "absent.cfg"), IoError);
}

TEST_CASE("format_double survives a parse round trip bit for bit") {
    for (double x : {3.141592653589793, 0.1, 1.0 / 3.0, 1e-300, 9.0, -0.0,
                     12345.678901234567, 2.2250738585072014e-308,
                     1.7976931348623157e308}) {
        const double back = io::parse_double(io::format_double(x));
        CHECK(same_bits(back, x));
    }
}

TEST_CASE("parse_double rejects what is not one clean number") {
    CHECK_THROWS_AS((void)io::parse_double(""), ValidationError);
    CHECK_THROWS_AS((void)io::parse_double("abc"), ValidationError);
    CHECK_THROWS_AS((void)io::parse_double("1.2.3"), ValidationError);
    CHECK_THROWS_AS((void)io::parse_double("4 5"), ValidationError);
    CHECK_THROWS_AS((void)io::parse_double("1e999999"), ValidationError);
    CHECK(io::parse_double("  2.5") == 2.5);
}

TEST_CASE("csv rendering round-trips and keeps unix line endings") {
    io::CsvTable table;
    table.header = {"t_s", "v_V", "note"};
    table.units = {"s", "V", "-"};
    table.rows = {{io::format_double(0.1), io::format_double(-3.25), "ok"},
                  {io::format_double(0.2), io::format_double(7.5), "ok"}};
    const std::string text = io::render_csv(table);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.back() == '\n');

    const io::CsvTable back = io::parse_csv(text);
    CHECK(back.header == table.header);
    CHECK(back.units == table.units);
    CHECK(back.rows == table.rows);

    const io::CsvTable fromCrlf = io::parse_csv("a,b\n-,-\r\n1,2\r\n");
    CHECK(fromCrlf.header == std::vector<std::string>{"a", "b"});
    CHECK(fromCrlf.rows.size() == 1);
}

TEST_CASE("ragged tables are refused") {
    io::CsvTable table;
    table.header = {"a", "b"};
    table.units = {"-", "-"};
    table.rows = {{"1"}};
    CHECK_THROWS_AS((void)io::render_csv(table), ValidationError);
}

TEST_CASE("numeric_column extracts by name or sole column") {
    io::CsvTable table;
    table.header = {"x", "y"};
    table.units = {"-", "-"};
    table.rows = {{"1", "4"}, {"2", "5"}, {"3", "6"}};
    CHECK(io::numeric_column(table, "y") == std::vector<double>{4.0, 5.0, 6.0});
    CHECK_THROWS_AS((void)io::numeric_column(table, "z"), ValidationError);
    CHECK_THROWS_AS((void)io::numeric_column(table), ValidationError);

    io::CsvTable single;
    single.header = {"v"};
    single.units = {"V"};
    single.rows = {{"0.5"}, {"0.25"}};
    CHECK(io::numeric_column(single) == std::vector<double>{0.5, 0.25});
}

TEST_CASE("csv files write and read back") {
    const fs::path path = scratch_dir() / "table.csv";
    io::CsvTable table;
    table.header = {"n"};
    table.units = {"-"};
    table.rows = {{"1"}, {"2"}};
    io::write_csv(path, table);
    const io::CsvTable back = io::read_csv(path);
    CHECK(back.rows == table.rows);
    CHECK_THROWS_AS((void)io::read_csv(scratch_dir() / "absent.csv"), IoError);
}

TEST_CASE("svg output is well-formed, escaped, and deterministic") {
    io::Plot plot;
    plot.title = "a<b & c>d";
    plot.x_label = "time";
    plot.y_label = "level";
    io::PlotSeries line;
    for (int n = 0; n <= 100; ++n) {
        line.x.push_back(0.01 * n);
        line.y.push_back(std::sin(0.2 * n));
    }
    plot.series.push_back(line);
    io::PlotSeries dots = line;
    dots.dots = true;
    plot.series.push_back(dots);

    const std::string svg = io::render_svg(plot);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("a&lt;b &amp; c&gt;d") != std::string::npos);
    CHECK(svg.find("a<b") == std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("<text") != std::string::npos);
    CHECK(io::render_svg(plot) == svg);

    const fs::path path = scratch_dir() / "plot.svg";
    io::write_svg(path, plot);
    CHECK(io::read_text_file(path) == svg);
}

TEST_CASE("text file helpers surface io failures") {
    CHECK_THROWS_AS((void)io::read_text_file("/nonexistent/dir/file.txt"), IoError);
    const fs::path path = scratch_dir() / "note.txt";
    io::write_text_file(path, "hello\n");
    CHECK(io::read_text_file(path) == "hello\n");
}
