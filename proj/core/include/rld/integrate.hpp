#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rld/circuit.hpp"
#include "rld/errors.hpp"

namespace rld {

/// Fixed-step integration window. The step h is expected to divide the drive
/// period exactly (h = T / steps_per_cycle) so stroboscopic sampling needs no
/// interpolation; build_integration_config enforces that.
struct IntegrationConfig {
    double step_size = 1e-8;        ///< h, seconds
    double t_start = 0.0;           ///< seconds
    double t_end = 1e-3;            ///< seconds
    double event_tolerance = 1e-14; ///< bisection window width, seconds; < h
    int max_event_iterations = 60;
};

/// Throws ValidationError naming the violated constraint.
void validate(const IntegrationConfig& cfg);

/// Grid-aligned window covering `cycles` drive periods at `steps_per_cycle`
/// steps each, with event_tolerance scaled to the step.
[[nodiscard]] IntegrationConfig build_integration_config(const CircuitParams& params,
                                                         int cycles,
                                                         int steps_per_cycle,
                                                         double event_tolerance_frac = 1e-6,
                                                         int max_event_iterations = 60);

/// Uniformly sampled solution. states[n] is the state at t0 + n*dt;
/// switch_times records every located region crossing in increasing order.
struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<State> states;
    std::vector<double> switch_times;
};

/// One-dimensional counterpart for the exponential-model current.
struct ScalarTrajectory {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values; ///< amperes
};

namespace detail {

inline void require_finite_stage(const StateDerivative& d, double t) {
    if (!std::isfinite(d.d_charge) || !std::isfinite(d.d_current))
        throw NumericalError("non-finite vector field at t = " + std::to_string(t));
}

} // namespace detail

/// Classical fourth-order Runge-Kutta step of size h. `field` is any callable
/// (double t, const State&) -> StateDerivative. Throws NumericalError if a
/// stage evaluates non-finite, naming the offending time.
template <class Field>
[[nodiscard]] State rk4_step(Field&& field, double t, const State& x, double h) {
    const StateDerivative k1 = field(t, x);
    detail::require_finite_stage(k1, t);
    const State x2{x.charge + 0.5 * h * k1.d_charge,
                   x.current + 0.5 * h * k1.d_current};
    const StateDerivative k2 = field(t + 0.5 * h, x2);
    detail::require_finite_stage(k2, t + 0.5 * h);
    const State x3{x.charge + 0.5 * h * k2.d_charge,
                   x.current + 0.5 * h * k2.d_current};
    const StateDerivative k3 = field(t + 0.5 * h, x3);
    detail::require_finite_stage(k3, t + 0.5 * h);
    const State x4{x.charge + h * k3.d_charge, x.current + h * k3.d_current};
    const StateDerivative k4 = field(t + h, x4);
    detail::require_finite_stage(k4, t + h);
    return State{
        x.charge + h / 6.0 * (k1.d_charge + 2.0 * k2.d_charge + 2.0 * k3.d_charge +
                              k4.d_charge),
        x.current + h / 6.0 * (k1.d_current + 2.0 * k2.d_current +
                               2.0 * k3.d_current + k4.d_current)};
}

/// Scalar variant for one-dimensional fields (double t, double x) -> double.
template <class Field>
[[nodiscard]] double rk4_step_scalar(Field&& field, double t, double x, double h) {
    const double k1 = field(t, x);
    const double k2 = field(t + 0.5 * h, x + 0.5 * h * k1);
    const double k3 = field(t + 0.5 * h, x + 0.5 * h * k2);
    const double k4 = field(t + h, x + h * k3);
    const double out = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(out))
        throw NumericalError("non-finite scalar step at t = " + std::to_string(t));
    return out;
}

struct CrossingResult {
    double t = 0.0;
    State x;
};

/// Bisection location of a sign change of `surface` along the single RK4 step
/// from (t_lo, x_lo) to t_hi. Each probe re-integrates from x_lo with one
/// rk4_step of the probe size, so the bracket width is measured as a step
/// offset and never hits the floating-point resolution of absolute time.
/// Returns the bracket's far end once its width drops below tol.
///
/// Preconditions: surface(x_lo) and the surface at the step end have opposite
/// signs, or one of them is zero. Same signs throw ValidationError (caller
/// bug); exceeding max_iterations throws NumericalError.
template <class Field, class Surface>
[[nodiscard]] CrossingResult locate_crossing(Field&& field, Surface&& surface,
                                             double t_lo, double t_hi,
                                             const State& x_lo, double tol,
                                             int max_iterations = 60) {
    const double s_lo = surface(x_lo);
    if (s_lo == 0.0) return CrossingResult{t_lo, x_lo};
    const double width = t_hi - t_lo;
    if (!(width > 0.0)) throw ValidationError("locate_crossing: empty bracket");

    const auto probe = [&](double offset) { return rk4_step(field, t_lo, x_lo, offset); };

    double lo = 0.0;
    double hi = width;
    {
        const double s_hi = surface(probe(hi));
        if (s_hi == 0.0) {
            // fall through: bisection tightens onto the far end anyway
        } else if ((s_lo > 0.0) == (s_hi > 0.0)) {
            throw ValidationError("locate_crossing: surface does not change sign "
                                  "across the bracket");
        }
    }
    int iterations = 0;
    while (hi - lo > tol) {
        if (++iterations > max_iterations)
            throw NumericalError("locate_crossing: no convergence within " +
                                 std::to_string(max_iterations) + " iterations");
        const double mid = 0.5 * (lo + hi);
        const double s_mid = surface(probe(mid));
        if (s_mid != 0.0 && (s_mid > 0.0) == (s_lo > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return CrossingResult{t_lo + hi, probe(hi)};
}

/// Event-driven fixed-step integration of the piecewise-linear model.
///
/// Within each step the region is frozen at the step's start; when the step
/// lands in the other region the crossing is located by bisection, the state
/// advances exactly to it, the region flips, and the remainder of the step is
/// retaken. Samples land on the uniform grid regardless of event substeps.
[[nodiscard]] Trajectory integrate(const CircuitParams& params, const State& x0,
                                   const IntegrationConfig& cfg);

/// Integration of the one-dimensional exponential-diode model.
///
/// The reverse-bias branch is numerically stiff beyond any explicit scheme's
/// reach (the diode's relaxation rate scales as 1/(I_s + i) and exceeds
/// 1e13 /s once the drive swings negative), so this routine steps with the
/// L-stable TR-BDF2 pair in the transformed variable u = ln(1 + i/I_s),
/// which also keeps i > -I_s structurally without clamping.
[[nodiscard]] ScalarTrajectory integrate_exponential(const CircuitParams& params,
                                                     const ExpDiodeParams& exp_params,
                                                     double i0,
                                                     const IntegrationConfig& cfg);

} // namespace rld
