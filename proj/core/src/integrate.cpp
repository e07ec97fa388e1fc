#include "rld/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace rld {

void validate(const IntegrationConfig& cfg) {
    const auto fail = [](const char* what) { throw ValidationError(what); };
    if (!(cfg.step_size > 0.0)) fail("step_size must be > 0");
    if (!(cfg.t_end > cfg.t_start)) fail("t_end must exceed t_start");
    if (!(cfg.event_tolerance > 0.0)) fail("event_tolerance must be > 0");
    if (!(cfg.event_tolerance < cfg.step_size))
        fail("event_tolerance must be smaller than step_size");
    if (cfg.max_event_iterations < 20) fail("max_event_iterations must be >= 20");
}

IntegrationConfig build_integration_config(const CircuitParams& params, int cycles,
                                           int steps_per_cycle,
                                           double event_tolerance_frac,
                                           int max_event_iterations) {
    if (cycles < 1) throw ValidationError("cycles must be >= 1");
    if (steps_per_cycle < 2) throw ValidationError("steps_per_cycle must be >= 2");
    if (!(event_tolerance_frac > 0.0 && event_tolerance_frac < 1.0))
        throw ValidationError("event_tolerance_frac must lie in (0, 1)");
    IntegrationConfig cfg;
    cfg.step_size = params.period() / steps_per_cycle;
    cfg.t_start = 0.0;
    cfg.t_end = cfg.step_size * (static_cast<double>(cycles) * steps_per_cycle);
    cfg.event_tolerance = cfg.step_size * event_tolerance_frac;
    cfg.max_event_iterations = max_event_iterations;
    validate(cfg);
    return cfg;
}

std::size_t grid_steps(const IntegrationConfig& cfg) {
    const double ratio = (cfg.t_end - cfg.t_start) / cfg.step_size;
    return static_cast<std::size_t>(std::floor(ratio + 1e-9));
}

namespace {

RegionId flipped(RegionId k) {
    return k == RegionId::Region1 ? RegionId::Region2 : RegionId::Region1;
}

} // namespace

Trajectory integrate(const CircuitParams& params, const State& x0,
                     const IntegrationConfig& cfg) {
    validate(params);
    validate(cfg);
    if (!std::isfinite(x0.charge) || !std::isfinite(x0.current))
        throw ValidationError("initial state must be finite");

    const double h = cfg.step_size;
    const std::size_t n_steps = grid_steps(cfg);
    const auto surface = [&](const State& s) { return s.charge - params.charge_offset; };

    Trajectory traj;
    traj.t0 = cfg.t_start;
    traj.dt = h;
    traj.states.reserve(n_steps + 1);
    traj.states.push_back(x0);

    State x = x0;
    RegionId reg = region_of(x0, params);
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double t_n = cfg.t_start + static_cast<double>(n) * h;
        double delta = 0.0;
        int events_here = 0;
        while (h - delta > 0.0) {
            const double t_sub = t_n + delta;
            const double rem = h - delta;
            const auto frozen = [&](double t, const State& s) {
                return vector_field_in_region(t, s, reg, params);
            };
            const State x_try = rk4_step(frozen, t_sub, x, rem);
            if (region_of(x_try, params) == reg) {
                x = x_try;
                break;
            }
            if (++events_here > 128)
                throw NumericalError("integrate: more than 128 region events within "
                                     "one step (chattering at t = " +
                                     std::to_string(t_sub) + ")");
            const CrossingResult ev =
                locate_crossing(frozen, surface, t_sub, t_sub + rem, x,
                                cfg.event_tolerance, cfg.max_event_iterations);
            traj.switch_times.push_back(ev.t);
            reg = flipped(reg);
            const double advanced = ev.t - t_sub;
            if (advanced > 0.0) {
                x = ev.x;
                delta += advanced;
            }
            // advanced == 0 means the crossing sat exactly on the substep
            // start; the region flip alone re-arms the remainder step
        }
        traj.states.push_back(x);
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Exponential model, TR-BDF2 in u = ln(1 + i/I_s)
// ---------------------------------------------------------------------------

namespace {

// Both TR-BDF2 stages reduce to solving  x - c*g(t, x) = rhs  for x, where
//   g(t, x) = (a(t) - R I_s expm1(x) - n V_T x) / (L I_s e^x)
// is the transformed field. Multiplying through by L I_s e^x(> 0) gives the
// overflow-free residual
//   psi(x) = (x - rhs) L I_s e^x - c (a - R I_s expm1(x) - n V_T x),
// whose root is bracketed and polished by a bisection-safeguarded Newton
// iteration. psi -> -inf as x -> -inf and psi -> +inf as x -> +inf for every
// c > 0, so a sign-changing bracket always exists.
struct StageSolver {
    double l_is;  // L * I_s
    double r_is;  // R * I_s
    double nvt;   // n * V_T

    [[nodiscard]] double psi(double x, double rhs, double c, double a) const {
        return (x - rhs) * l_is * std::exp(x) - c * (a - r_is * std::expm1(x) - nvt * x);
    }

    [[nodiscard]] double dpsi(double x, double rhs, double c) const {
        return l_is * std::exp(x) * (1.0 + x - rhs) + c * (r_is * std::exp(x) + nvt);
    }

    [[nodiscard]] double solve(double rhs, double c, double a) const {
        double lo = std::min(rhs, -(std::abs(a) + r_is) / nvt - 50.0);
        double hi = std::max(rhs, 50.0);
        double f_lo = psi(lo, rhs, c, a);
        double f_hi = psi(hi, rhs, c, a);
        for (int k = 0; f_lo > 0.0 && k < 60; ++k) {
            lo -= 100.0;
            f_lo = psi(lo, rhs, c, a);
        }
        for (int k = 0; f_hi < 0.0 && k < 60; ++k) {
            hi += 10.0;
            f_hi = psi(hi, rhs, c, a);
        }
        if (f_lo > 0.0 || f_hi < 0.0)
            throw NumericalError("exponential-model stage solve: no bracket");
        double x = std::clamp(rhs, lo, hi);
        for (int it = 0; it < 200; ++it) {
            const double fx = psi(x, rhs, c, a);
            if (fx == 0.0) return x; // exact root; a rest state must stay at rest
            if (fx > 0.0)
                hi = x;
            else
                lo = x;
            const double d = dpsi(x, rhs, c);
            double next;
            if (std::isfinite(d) && d > 0.0) {
                next = x - fx / d;
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            } else {
                next = 0.5 * (lo + hi);
            }
            if (std::abs(next - x) <= 1e-14 * std::max(1.0, std::abs(next)))
                return next;
            x = next;
        }
        return x;
    }
};

} // namespace

ScalarTrajectory integrate_exponential(const CircuitParams& params,
                                       const ExpDiodeParams& exp_params, double i0,
                                       const IntegrationConfig& cfg) {
    validate(params);
    validate(exp_params);
    validate(cfg);
    if (!(i0 > -exp_params.saturation_current))
        throw ValidationError("integrate_exponential: i0 must exceed -I_s");

    const double is = exp_params.saturation_current;
    const StageSolver solver{params.inductance * is, params.resistance * is,
                             exp_params.emission_coefficient *
                                 exp_params.thermal_voltage};
    constexpr double gamma = 0.5857864376269049; // 2 - sqrt(2)
    const double h = cfg.step_size;
    const std::size_t n_steps = grid_steps(cfg);

    ScalarTrajectory traj;
    traj.t0 = cfg.t_start;
    traj.dt = h;
    traj.values.reserve(n_steps + 1);

    double u = std::log1p(i0 / is);
    traj.values.push_back(is * std::expm1(u));
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double t = cfg.t_start + static_cast<double>(n) * h;
        // trapezoidal sub-step as an implicit midpoint over [t, t + gamma h]
        const double gh = gamma * h;
        const double a_mid = drive_voltage(t + 0.5 * gh, params);
        const double mid = solver.solve(u, 0.5 * gh, a_mid);
        const double u1 = 2.0 * mid - u;
        // BDF2 closure to t + h
        const double c2 = h * (1.0 - gamma) / (2.0 - gamma);
        const double rhs2 = (u1 - (1.0 - gamma) * (1.0 - gamma) * u) /
                            (gamma * (2.0 - gamma));
        const double a_end = drive_voltage(t + h, params);
        u = solver.solve(rhs2, c2, a_end);
        if (!std::isfinite(u))
            throw NumericalError("integrate_exponential: non-finite state at t = " +
                                 std::to_string(t + h));
        traj.values.push_back(is * std::expm1(u));
    }
    return traj;
}

} // namespace rld
