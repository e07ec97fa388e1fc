#include "rld/config.hpp"

#include <string>

#include "rld/csv.hpp"
#include "rld/errors.hpp"

namespace rld {

namespace {

std::string trimmed(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail_at(int line, const std::string& what) {
    throw ValidationError("config line " + std::to_string(line) + ": " + what);
}

double as_double(const std::string& v, int line) {
    try {
        return io::parse_double(v);
    } catch (const ValidationError& e) {
        fail_at(line, e.what());
    }
}

int as_int(const std::string& v, int line) {
    const double d = as_double(v, line);
    const int n = static_cast<int>(d);
    if (static_cast<double>(n) != d) fail_at(line, "expected an integer, got '" + v + "'");
    return n;
}

bool as_bool(const std::string& v, int line) {
    if (v == "true") return true;
    if (v == "false") return false;
    fail_at(line, "expected true or false, got '" + v + "'");
}

Waveform as_waveform(const std::string& v, int line) {
    if (v == "cosine") return Waveform::Cosine;
    if (v == "sine") return Waveform::Sine;
    fail_at(line, "expected cosine or sine, got '" + v + "'");
}

ThresholdMode as_threshold_mode(const std::string& v, int line) {
    if (v == "always_on") return ThresholdMode::AlwaysOn;
    if (v == "forward_only") return ThresholdMode::ForwardOnly;
    fail_at(line, "expected always_on or forward_only, got '" + v + "'");
}

const char* name_of(Waveform w) {
    return w == Waveform::Cosine ? "cosine" : "sine";
}

const char* name_of(ThresholdMode m) {
    return m == ThresholdMode::AlwaysOn ? "always_on" : "forward_only";
}

void apply_key(RunConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value, int line) {
    auto& c = cfg.circuit;
    if (section == "circuit") {
        if (key == "resistance") c.resistance = as_double(value, line);
        else if (key == "inductance") c.inductance = as_double(value, line);
        else if (key == "drive_amplitude") c.drive_amplitude = as_double(value, line);
        else if (key == "drive_frequency") c.drive_frequency = as_double(value, line);
        else if (key == "drive_waveform") c.drive_waveform = as_waveform(value, line);
        else if (key == "threshold_voltage") c.threshold_voltage = as_double(value, line);
        else if (key == "charge_offset") c.charge_offset = as_double(value, line);
        else if (key == "cap_region1") c.cap_region1 = as_double(value, line);
        else if (key == "cap_region2") c.cap_region2 = as_double(value, line);
        else if (key == "cond_region1") c.cond_region1 = as_double(value, line);
        else if (key == "cond_region2") c.cond_region2 = as_double(value, line);
        else if (key == "threshold_mode") c.threshold_mode = as_threshold_mode(value, line);
        else fail_at(line, "unknown key '" + key + "' in [circuit]");
    } else if (section == "integration") {
        auto& s = cfg.integration;
        if (key == "steps_per_cycle") s.steps_per_cycle = as_int(value, line);
        else if (key == "event_tolerance_fraction")
            s.event_tolerance_fraction = as_double(value, line);
        else if (key == "max_event_iterations")
            s.max_event_iterations = as_int(value, line);
        else fail_at(line, "unknown key '" + key + "' in [integration]");
    } else if (section == "analysis") {
        auto& s = cfg.analysis;
        if (key == "transient_cycles") s.transient_cycles = as_int(value, line);
        else if (key == "record_cycles") s.record_cycles = as_int(value, line);
        else if (key == "epsilon") s.epsilon = as_double(value, line);
        else if (key == "max_period") s.max_period = as_int(value, line);
        else fail_at(line, "unknown key '" + key + "' in [analysis]");
    } else if (section == "chaoskit") {
        auto& s = cfg.chaoskit;
        if (key == "transient_cycles") s.transient_cycles = as_int(value, line);
        else if (key == "record_cycles") s.record_cycles = as_int(value, line);
        else if (key == "samples_per_cycle") s.samples_per_cycle = as_int(value, line);
        else if (key == "bins") s.bins = as_int(value, line);
        else if (key == "max_delay") s.max_delay = as_int(value, line);
        else if (key == "m_max") s.m_max = as_int(value, line);
        else if (key == "r_tol") s.r_tol = as_double(value, line);
        else if (key == "a_tol") s.a_tol = as_double(value, line);
        else if (key == "fnn_threshold") s.fnn_threshold = as_double(value, line);
        else if (key == "fnn_max_points") s.fnn_max_points = as_int(value, line);
        else if (key == "theiler_window") s.theiler_window = as_int(value, line);
        else if (key == "follow_steps") s.follow_steps = as_int(value, line);
        else if (key == "replace_threshold") s.replace_threshold = as_double(value, line);
        else if (key == "min_separation") s.min_separation = as_double(value, line);
        else fail_at(line, "unknown key '" + key + "' in [chaoskit]");
    } else if (section == "exponential") {
        auto& s = cfg.exponential;
        if (key == "saturation_current") s.saturation_current = as_double(value, line);
        else if (key == "emission_coefficient")
            s.emission_coefficient = as_double(value, line);
        else if (key == "thermal_voltage") s.thermal_voltage = as_double(value, line);
        else fail_at(line, "unknown key '" + key + "' in [exponential]");
    } else if (section == "output") {
        auto& s = cfg.output;
        if (key == "directory") s.directory = value;
        else if (key == "svg") s.svg = as_bool(value, line);
        else fail_at(line, "unknown key '" + key + "' in [output]");
    } else {
        fail_at(line, "unknown section [" + section + "]");
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

} // namespace

void validate(const RunConfig& cfg) {
    validate(cfg.circuit);
    validate(cfg.exponential);

    const auto& in = cfg.integration;
    require(in.steps_per_cycle >= 8, "integration.steps_per_cycle must be >= 8");
    require(in.event_tolerance_fraction > 0.0 && in.event_tolerance_fraction < 1.0,
            "integration.event_tolerance_fraction must lie in (0, 1)");
    require(in.max_event_iterations >= 20,
            "integration.max_event_iterations must be >= 20");

    const auto& an = cfg.analysis;
    require(an.transient_cycles >= 0, "analysis.transient_cycles must be >= 0");
    require(an.max_period >= 1, "analysis.max_period must be >= 1");
    require(an.record_cycles >= 4 * an.max_period,
            "analysis.record_cycles must be >= 4 * max_period");
    require(an.record_cycles >= 16,
            "analysis.record_cycles must be >= 16 (section span)");
    require(an.epsilon > 0.0, "analysis.epsilon must be > 0");

    const auto& ck = cfg.chaoskit;
    require(ck.transient_cycles >= 0, "chaoskit.transient_cycles must be >= 0");
    require(ck.record_cycles >= 1, "chaoskit.record_cycles must be >= 1");
    require(ck.samples_per_cycle >= 2, "chaoskit.samples_per_cycle must be >= 2");
    require(in.steps_per_cycle % ck.samples_per_cycle == 0,
            "chaoskit.samples_per_cycle must divide integration.steps_per_cycle");
    require(ck.bins >= 2, "chaoskit.bins must be >= 2");
    require(ck.max_delay >= 2, "chaoskit.max_delay must be >= 2");
    require(ck.max_delay < ck.record_cycles * ck.samples_per_cycle / 4,
            "chaoskit.max_delay must be below a quarter of the recorded samples");
    require(ck.m_max >= 2, "chaoskit.m_max must be >= 2");
    require(ck.r_tol > 0.0, "chaoskit.r_tol must be > 0");
    require(ck.a_tol > 0.0, "chaoskit.a_tol must be > 0");
    require(ck.fnn_threshold > 0.0 && ck.fnn_threshold < 1.0,
            "chaoskit.fnn_threshold must lie in (0, 1)");
    require(ck.fnn_max_points >= 0, "chaoskit.fnn_max_points must be >= 0");
    require(ck.theiler_window >= 0, "chaoskit.theiler_window must be >= 0");
    require(ck.follow_steps >= 1, "chaoskit.follow_steps must be >= 1");
    require(ck.replace_threshold > 0.0 && ck.replace_threshold < 1.0,
            "chaoskit.replace_threshold must lie in (0, 1)");
    require(ck.min_separation > 0.0 && ck.min_separation < ck.replace_threshold,
            "chaoskit.min_separation must lie in (0, replace_threshold)");

    require(!cfg.output.directory.empty(), "output.directory must not be empty");
    require(cfg.output.directory.find('#') == std::string::npos &&
                cfg.output.directory.find('\n') == std::string::npos,
            "output.directory must not contain '#' or newlines");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::string section;
    int line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string raw =
            text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line;

        std::string s = raw;
        if (const auto hash = s.find('#'); hash != std::string::npos) s.resize(hash);
        s = trimmed(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail_at(line, "unterminated section header");
            section = trimmed(s.substr(1, s.size() - 2));
            if (section.empty()) fail_at(line, "empty section name");
            if (section != "circuit" && section != "integration" &&
                section != "analysis" && section != "chaoskit" &&
                section != "exponential" && section != "output")
                fail_at(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail_at(line, "expected key = value");
        const std::string key = trimmed(s.substr(0, eq));
        const std::string value = trimmed(s.substr(eq + 1));
        if (key.empty()) fail_at(line, "empty key");
        if (section.empty()) fail_at(line, "key '" + key + "' outside any section");
        apply_key(cfg, section, key, value, line);
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    return parse_config(io::read_text_file(path));
}

std::string echo_config(const RunConfig& cfg) {
    const auto d = io::format_double;
    std::string out;
    const auto kv = [&out](const std::string& k, const std::string& v) {
        out += k + " = " + v + "\n";
    };
    out += "[circuit]\n";
    kv("resistance", d(cfg.circuit.resistance));
    kv("inductance", d(cfg.circuit.inductance));
    kv("drive_amplitude", d(cfg.circuit.drive_amplitude));
    kv("drive_frequency", d(cfg.circuit.drive_frequency));
    kv("drive_waveform", name_of(cfg.circuit.drive_waveform));
    kv("threshold_voltage", d(cfg.circuit.threshold_voltage));
    kv("charge_offset", d(cfg.circuit.charge_offset));
    kv("cap_region1", d(cfg.circuit.cap_region1));
    kv("cap_region2", d(cfg.circuit.cap_region2));
    kv("cond_region1", d(cfg.circuit.cond_region1));
    kv("cond_region2", d(cfg.circuit.cond_region2));
    kv("threshold_mode", name_of(cfg.circuit.threshold_mode));
    out += "\n[integration]\n";
    kv("steps_per_cycle", std::to_string(cfg.integration.steps_per_cycle));
    kv("event_tolerance_fraction", d(cfg.integration.event_tolerance_fraction));
    kv("max_event_iterations", std::to_string(cfg.integration.max_event_iterations));
    out += "\n[analysis]\n";
    kv("transient_cycles", std::to_string(cfg.analysis.transient_cycles));
    kv("record_cycles", std::to_string(cfg.analysis.record_cycles));
    kv("epsilon", d(cfg.analysis.epsilon));
    kv("max_period", std::to_string(cfg.analysis.max_period));
    out += "\n[chaoskit]\n";
    kv("transient_cycles", std::to_string(cfg.chaoskit.transient_cycles));
    kv("record_cycles", std::to_string(cfg.chaoskit.record_cycles));
    kv("samples_per_cycle", std::to_string(cfg.chaoskit.samples_per_cycle));
    kv("bins", std::to_string(cfg.chaoskit.bins));
    kv("max_delay", std::to_string(cfg.chaoskit.max_delay));
    kv("m_max", std::to_string(cfg.chaoskit.m_max));
    kv("r_tol", d(cfg.chaoskit.r_tol));
    kv("a_tol", d(cfg.chaoskit.a_tol));
    kv("fnn_threshold", d(cfg.chaoskit.fnn_threshold));
    kv("fnn_max_points", std::to_string(cfg.chaoskit.fnn_max_points));
    kv("theiler_window", std::to_string(cfg.chaoskit.theiler_window));
    kv("follow_steps", std::to_string(cfg.chaoskit.follow_steps));
    kv("replace_threshold", d(cfg.chaoskit.replace_threshold));
    kv("min_separation", d(cfg.chaoskit.min_separation));
    out += "\n[exponential]\n";
    kv("saturation_current", d(cfg.exponential.saturation_current));
    kv("emission_coefficient", d(cfg.exponential.emission_coefficient));
    kv("thermal_voltage", d(cfg.exponential.thermal_voltage));
    out += "\n[output]\n";
    kv("directory", cfg.output.directory);
    kv("svg", cfg.output.svg ? "true" : "false");
    return out;
}

} // namespace rld
