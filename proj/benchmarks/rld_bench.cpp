#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "rld/analysis.hpp"
#include "rld/chaoskit.hpp"
#include "rld/circuit.hpp"
#include "rld/integrate.hpp"

namespace {

using namespace rld;

const CircuitParams& chaotic_params() {
    static const CircuitParams params; // E = 9 V: the aperiodic band
    return params;
}

// Resistor-voltage series for the estimator benchmarks, built once.
const ScalarSeries& sample_series() {
    static const ScalarSeries series = [] {
        const CircuitParams& p = chaotic_params();
        const IntegrationConfig cfg = build_integration_config(p, 128, 1000);
        const Trajectory traj = integrate(p, State{p.charge_offset, 0.0}, cfg);
        ScalarSeries s;
        s.dt = traj.dt * 25.0;
        for (std::size_t n = 0; n < traj.states.size(); n += 25)
            s.values.push_back(resistor_voltage(traj.states[n], p));
        return zscored(s);
    }();
    return series;
}

void BM_rk4_step(benchmark::State& state) {
    const CircuitParams& p = chaotic_params();
    const auto field = [&p](double t, const State& x) {
        return vector_field_in_region(t, x, RegionId::Region1, p);
    };
    State x{p.charge_offset - 1e-9, 0.01};
    double t = 0.0;
    const double h = p.period() / 1000.0;
    for (auto _ : state) {
        x = rk4_step(field, t, x, h);
        t += h;
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_rk4_step);

void BM_integrate_cycle(benchmark::State& state) {
    const CircuitParams& p = chaotic_params();
    const IntegrationConfig cfg = build_integration_config(p, 1, 1000);
    const State x0{p.charge_offset, 0.0};
    for (auto _ : state) {
        const Trajectory traj = integrate(p, x0, cfg);
        benchmark::DoNotOptimize(traj.states.back());
    }
}
BENCHMARK(BM_integrate_cycle);

void BM_integrate_exponential_cycle(benchmark::State& state) {
    const CircuitParams& p = chaotic_params();
    const ExpDiodeParams diode;
    const IntegrationConfig cfg = build_integration_config(p, 1, 1000);
    for (auto _ : state) {
        const ScalarTrajectory traj = integrate_exponential(p, diode, 0.0, cfg);
        benchmark::DoNotOptimize(traj.values.back());
    }
}
BENCHMARK(BM_integrate_exponential_cycle);

void BM_classify(benchmark::State& state) {
    StroboscopicSection section;
    section.drive_period = 1e-5;
    for (int n = 0; n < 256; ++n) {
        const double phase = static_cast<double>(n % 7);
        section.points.push_back(State{1e-9 + 1e-11 * phase, 0.1 * phase});
    }
    for (auto _ : state) {
        const PeriodClass cls = classify_period(section, 1e-3, 16);
        benchmark::DoNotOptimize(cls.period);
    }
}
BENCHMARK(BM_classify);

void BM_ami(benchmark::State& state) {
    const ScalarSeries& z = sample_series();
    for (auto _ : state) {
        const auto ami = average_mutual_information(z, 100, 64);
        benchmark::DoNotOptimize(ami.back().bits);
    }
}
BENCHMARK(BM_ami);

void BM_fnn(benchmark::State& state) {
    const ScalarSeries& z = sample_series();
    for (auto _ : state) {
        const auto fnn = false_nearest_neighbors(z, 10, 8, 15.0, 2.0, 2048, 1);
        benchmark::DoNotOptimize(fnn.back().fraction);
    }
}
BENCHMARK(BM_fnn);

void BM_wolf(benchmark::State& state) {
    const ScalarSeries& z = sample_series();
    for (auto _ : state) {
        const LyapunovReport report =
            max_lyapunov(z, EmbeddingSpec{10, 3}, 30, 3, 0.1, 1e-9);
        benchmark::DoNotOptimize(report.exponent);
    }
}
BENCHMARK(BM_wolf);

} // namespace

BENCHMARK_MAIN();
