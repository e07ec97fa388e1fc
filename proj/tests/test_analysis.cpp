#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rld/analysis.hpp"
#include "rld/circuit.hpp"
#include "rld/errors.hpp"
#include "rld/integrate.hpp"

using namespace rld;

namespace {

// Direct definition check, written against the stated recurrence rule and
// nothing else: smallest k whose k-shifted points all sit within
// epsilon * diameter, Aperiodic (0) otherwise.
int oracle_classify(const std::vector<State>& pts, double epsilon, int max_period) {
    double diameter = 0.0;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
            diameter = std::max(diameter, std::hypot(pts[a].charge - pts[b].charge,
                                                     pts[a].current - pts[b].current));
    for (int k = 1; k <= max_period; ++k) {
        bool fits = true;
        for (std::size_t n = 0; n + static_cast<std::size_t>(k) < pts.size(); ++n) {
            const auto& p = pts[n];
            const auto& q = pts[n + static_cast<std::size_t>(k)];
            if (std::hypot(p.charge - q.charge, p.current - q.current) >
                epsilon * diameter) {
                fits = false;
                break;
            }
        }
        if (fits) return k;
    }
    return 0;
}

StroboscopicSection section_of(const std::vector<State>& pts) {
    StroboscopicSection s;
    s.drive_period = 1.0;
    s.points = pts;
    return s;
}

// A k-cycle repeated out to `count` points, spread out in both components.
std::vector<State> cycle_points(int k, std::size_t count) {
    std::vector<State> pts;
    pts.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        const auto phase = static_cast<double>(n % static_cast<std::size_t>(k));
        pts.push_back(State{1.0 + phase, -2.0 * phase});
    }
    return pts;
}

Trajectory settled(const CircuitParams& p, int transient, int record, int spc) {
    const IntegrationConfig cfg =
        build_integration_config(p, transient + record, spc);
    return integrate(p, State{p.charge_offset, 0.0}, cfg);
}

} // namespace

TEST_CASE("stroboscopic_section of a constant trajectory repeats one point") {
    CircuitParams p;
    p.drive_amplitude = 0.0;
    p.threshold_mode = ThresholdMode::ForwardOnly;
    const Trajectory traj = settled(p, 0, 20, 50);
    const StroboscopicSection s = stroboscopic_section(traj, p, 2);
    CHECK(s.points.size() == 18);
    for (const State& x : s.points) {
        CHECK(x.charge == p.charge_offset);
        CHECK(x.current == 0.0);
    }
}

TEST_CASE("stroboscopic_section picks exact period multiples") {
    // Hand-built trajectory on a 4-sample grid per period: the section must
    // land on samples 0 mod 4, skipping the transient.
    CircuitParams p;
    p.drive_frequency = 1.0;
    Trajectory traj;
    traj.t0 = 0.0;
    traj.dt = 0.25;
    const int cycles = 40;
    for (int n = 0; n <= cycles * 4; ++n) {
        const int cycle = n / 4;
        const double mark = (cycle % 2 == 0) ? 1.0 : -1.0; // alternates per cycle
        traj.states.push_back(State{mark, static_cast<double>(n % 4)});
    }
    const StroboscopicSection s = stroboscopic_section(traj, p, 4);
    CHECK(s.points.size() == 36);
    for (std::size_t n = 0; n < s.points.size(); ++n) {
        CHECK(s.points[n].current == 0.0); // always the on-period sample
        const double expect = ((n + 5) % 2 == 0) ? 1.0 : -1.0; // cycles 5, 6, ...
        CHECK(s.points[n].charge == expect);
    }
}

TEST_CASE("stroboscopic_section refuses a short trajectory") {
    CircuitParams p;
    const Trajectory traj = settled(p, 0, 10, 50);
    CHECK_THROWS_WITH_AS((void)stroboscopic_section(traj, p, 4),
                         doctest::Contains("20"), ValidationError);
}

TEST_CASE("classify_period identifies exact cycles minimally") {
    CHECK(classify_period(section_of(cycle_points(1, 40)), 1e-3, 8).period == 1);

    const PeriodClass two = classify_period(section_of(cycle_points(2, 40)), 1e-3, 8);
    CHECK(two.period == 2);

    const PeriodClass three = classify_period(section_of(cycle_points(3, 48)), 1e-3, 8);
    CHECK(three.period == 3); // not 6: smallest k wins

    CHECK(classify_period(section_of(cycle_points(5, 40)), 1e-3, 8).period == 5);
}

TEST_CASE("classify_period labels") {
    CHECK(PeriodClass{1}.label() == "P1");
    CHECK(PeriodClass{12}.label() == "P12");
    CHECK(PeriodClass{0}.label() == "APERIODIC");
    CHECK(PeriodClass{0}.is_periodic() == false);
    CHECK(PeriodClass{3}.is_periodic() == true);
}

TEST_CASE("random scatter classifies aperiodic, matching the definition oracle") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::vector<State> pts;
    for (int n = 0; n < 256; ++n) pts.push_back(State{coord(rng), coord(rng)});

    CHECK(oracle_classify(pts, 1e-3, 16) == 0);
    CHECK(classify_period(section_of(pts), 1e-3, 16).period == 0);
}

TEST_CASE("classify_period agrees with the definition oracle on mixed cases") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> jitter(-1e-5, 1e-5);
    for (int k : {2, 3, 4, 7}) {
        std::vector<State> pts = cycle_points(k, 70);
        for (State& x : pts) {
            x.charge += jitter(rng);
            x.current += jitter(rng);
        }
        const int expect = oracle_classify(pts, 1e-3, 16);
        CHECK(classify_period(section_of(pts), 1e-3, 16).period == expect);
        CHECK(expect == k); // jitter sits far below epsilon * diameter
    }

    // Jittering a constant orbit leaves nothing but the jitter itself as the
    // section's scale, so it classifies aperiodic; only jitter under the
    // collapse floor reads as period 1. The oracle must agree either way.
    std::vector<State> noisy = cycle_points(1, 70);
    for (State& x : noisy) {
        x.charge += jitter(rng);
        x.current += jitter(rng);
    }
    CHECK(oracle_classify(noisy, 1e-3, 16) == 0);
    CHECK(classify_period(section_of(noisy), 1e-3, 16).period == 0);
}

TEST_CASE("classify_period is scale invariant") {
    const std::vector<State> base = cycle_points(3, 48);
    for (double scale : {1e-6, 1.0, 1e6}) {
        std::vector<State> pts = base;
        for (State& x : pts) {
            x.charge *= scale;
            x.current *= scale;
        }
        CHECK(classify_period(section_of(pts), 1e-3, 8).period == 3);
    }
}

TEST_CASE("classify_period of a doubled recording matches the single run") {
    std::vector<State> once = cycle_points(4, 64);
    std::vector<State> twice = once;
    twice.insert(twice.end(), once.begin(), once.end());
    CHECK(classify_period(section_of(once), 1e-3, 16).period ==
          classify_period(section_of(twice), 1e-3, 16).period);
}

TEST_CASE("a collapsed section is a fixed point, not a false cycle") {
    std::vector<State> pts(64, State{2.5e-3, 1e-4});
    for (std::size_t n = 0; n < pts.size(); ++n)
        pts[n].charge += static_cast<double>(n % 3) * 1e-15; // solver-noise scale
    CHECK(classify_period(section_of(pts), 1e-3, 16).period == 1);
}

TEST_CASE("classify_period refuses too few points") {
    CHECK_THROWS_AS((void)classify_period(section_of(cycle_points(2, 30)), 1e-3, 16),
                    ValidationError);
}

TEST_CASE("reference circuit is period-1 at half a volt") {
    CircuitParams p;
    p.drive_amplitude = 0.5;
    const Trajectory traj = settled(p, 200, 64, 1000);
    const StroboscopicSection s = stroboscopic_section(traj, p, 200);
    REQUIRE(s.points.size() == 64);
    CHECK(classify_period(s, 1e-3, 16).period == 1);
}

TEST_CASE("portrait projects drive voltage against resistor voltage") {
    CircuitParams p;
    p.drive_amplitude = 1.0;
    p.drive_frequency = 1.0;

    Trajectory traj;
    traj.t0 = 0.0;
    traj.dt = 0.125;
    for (int n = 0; n <= 32; ++n) traj.states.push_back(State{0.0, 0.0});

    const auto pairs = portrait(traj, p);
    CHECK(pairs.size() == traj.states.size());
    for (std::size_t n = 0; n < pairs.size(); ++n) {
        const double t = traj.t0 + static_cast<double>(n) * traj.dt;
        CHECK(pairs[n].first ==
              doctest::Approx(std::cos(p.omega() * t)).epsilon(1e-12));
        CHECK(pairs[n].second == 0.0); // horizontal segment at v_r = 0
    }

    const auto skipped = portrait(traj, p, 10);
    CHECK(skipped.size() == traj.states.size() - 10);
    CHECK(skipped.front().first == doctest::Approx(pairs[10].first));
}

TEST_CASE("period-1 portrait closes on itself") {
    CircuitParams p;
    p.drive_amplitude = 0.5;
    const int spc = 500;
    const Trajectory traj = settled(p, 100, 2, spc);
    const auto pairs = portrait(traj, p, 100 * spc);
    REQUIRE(pairs.size() == static_cast<std::size_t>(2 * spc) + 1);

    double scale = 0.0;
    for (const auto& [vin, vr] : pairs)
        scale = std::max({scale, std::fabs(vin), std::fabs(vr)});
    for (int n = 0; n < spc; ++n) {
        const auto& a = pairs[static_cast<std::size_t>(n)];
        const auto& b = pairs[static_cast<std::size_t>(n + spc)];
        CHECK(std::fabs(a.first - b.first) <= 1e-3 * scale);
        CHECK(std::fabs(a.second - b.second) <= 1e-3 * scale);
    }
}

TEST_CASE("bifurcation_sweep validates its grid") {
    CircuitParams p;
    const IntegrationConfig cfg = build_integration_config(p, 80, 200);
    CHECK_THROWS_AS(
        (void)bifurcation_sweep(p, 2.0, 2.0, 10, cfg, 16, 64), ValidationError);
    CHECK_THROWS_AS(
        (void)bifurcation_sweep(p, 1.0, 2.0, 1, cfg, 16, 64), ValidationError);
}

TEST_CASE("a small sweep classifies the period-1 shelf and stays ordered") {
    CircuitParams p;
    const int transient = 64, record = 16, spc = 400;
    const IntegrationConfig cfg = build_integration_config(p, transient + record, spc);
    const BifurcationDiagram d =
        bifurcation_sweep(p, 0.3, 0.7, 3, cfg, transient, record, 1, 1e-3, 4);

    REQUIRE(d.amplitudes.size() == 3);
    CHECK(d.amplitudes[0] == doctest::Approx(0.3));
    CHECK(d.amplitudes[2] == doctest::Approx(0.7));
    for (std::size_t j = 1; j < d.amplitudes.size(); ++j)
        CHECK(d.amplitudes[j] > d.amplitudes[j - 1]);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(d.failed[j] == 0);
        CHECK(d.sections[j].size() == record);
        CHECK(d.classes[j].period == 1);
    }
}

TEST_CASE("sweep results do not depend on the thread count") {
    CircuitParams p;
    const int transient = 64, record = 16, spc = 400;
    const IntegrationConfig cfg = build_integration_config(p, transient + record, spc);
    const BifurcationDiagram serial =
        bifurcation_sweep(p, 0.4, 1.6, 5, cfg, transient, record, 1, 1e-3, 4);
    const BifurcationDiagram threaded =
        bifurcation_sweep(p, 0.4, 1.6, 5, cfg, transient, record, 3, 1e-3, 4);

    CHECK(serial.amplitudes == threaded.amplitudes);
    CHECK(serial.sections == threaded.sections);
    REQUIRE(serial.classes.size() == threaded.classes.size());
    for (std::size_t j = 0; j < serial.classes.size(); ++j)
        CHECK(serial.classes[j].period == threaded.classes[j].period);
}

TEST_CASE("the period-1 shelf precedes a period-2 window") {
    CircuitParams p;
    const int transient = 200, record = 64, spc = 1000;
    const IntegrationConfig cfg = build_integration_config(p, transient + record, spc);
    const BifurcationDiagram d =
        bifurcation_sweep(p, 0.5, 1.15, 2, cfg, transient, record, 2);
    REQUIRE(d.classes.size() == 2);
    CHECK(d.classes[0].period == 1);
    CHECK(d.classes[1].period == 2);
}
