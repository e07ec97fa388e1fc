#include "rld/circuit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rld/errors.hpp"

namespace rld {

double CircuitParams::omega() const {
    return 2.0 * std::numbers::pi * drive_frequency;
}

void validate(const CircuitParams& params) {
    const auto fail = [](const std::string& what) { throw ValidationError(what); };
    if (!(params.resistance > 0.0)) fail("resistance must be > 0");
    if (!(params.inductance > 0.0)) fail("inductance must be > 0");
    if (!(params.drive_frequency > 0.0)) fail("drive_frequency must be > 0");
    if (!(params.cap_region1 > 0.0)) fail("cap_region1 must be > 0");
    if (!(params.cap_region2 > 0.0)) fail("cap_region2 must be > 0");
    if (!(params.cond_region1 >= 0.0)) fail("cond_region1 must be >= 0");
    if (!(params.cond_region2 >= 0.0)) fail("cond_region2 must be >= 0");
    if (!(params.cap_region2 > params.cap_region1))
        fail("cap_region2 must exceed cap_region1");
    if (!std::isfinite(params.drive_amplitude)) fail("drive_amplitude must be finite");
    if (!std::isfinite(params.threshold_voltage)) fail("threshold_voltage must be finite");
    if (!std::isfinite(params.charge_offset)) fail("charge_offset must be finite");
}

void validate(const ExpDiodeParams& params) {
    const auto fail = [](const std::string& what) { throw ValidationError(what); };
    if (!(params.saturation_current > 0.0)) fail("saturation_current must be > 0");
    if (!(params.emission_coefficient > 0.0)) fail("emission_coefficient must be > 0");
    if (!(params.thermal_voltage > 0.0)) fail("thermal_voltage must be > 0");
}

RegionId region_of(const State& state, const CircuitParams& params) {
    return state.charge - params.charge_offset > 0.0 ? RegionId::Region2
                                                     : RegionId::Region1;
}

double drive_voltage(double t, const CircuitParams& params) {
    const double phase = params.omega() * t;
    const double w = params.drive_waveform == Waveform::Cosine ? std::cos(phase)
                                                               : std::sin(phase);
    return params.drive_amplitude * w;
}

namespace {

double threshold_term(RegionId k, const CircuitParams& params) {
    if (params.threshold_mode == ThresholdMode::AlwaysOn)
        return params.threshold_voltage;
    return k == RegionId::Region2 ? params.threshold_voltage : 0.0;
}

} // namespace

StateDerivative vector_field_in_region(double t, const State& state, RegionId k,
                                       const CircuitParams& params) {
    const bool fwd = k == RegionId::Region2;
    const double ck = fwd ? params.cap_region2 : params.cap_region1;
    const double gk = fwd ? params.cond_region2 : params.cond_region1;
    const double x1 = state.charge - params.charge_offset;
    const double l = params.inductance;
    StateDerivative d;
    d.d_charge = -(gk / ck) * x1 + state.current;
    d.d_current = -x1 / (l * ck) - (params.resistance / l) * state.current +
                  (drive_voltage(t, params) - threshold_term(k, params)) / l;
    return d;
}

StateDerivative vector_field(double t, const State& state,
                             const CircuitParams& params) {
    return vector_field_in_region(t, state, region_of(state, params), params);
}

Matrix2x2 system_matrix(RegionId region, const CircuitParams& params) {
    const bool fwd = region == RegionId::Region2;
    const double ck = fwd ? params.cap_region2 : params.cap_region1;
    const double gk = fwd ? params.cond_region2 : params.cond_region1;
    const double l = params.inductance;
    Matrix2x2 a;
    a.a00 = -gk / ck;
    a.a01 = 1.0;
    a.a10 = -1.0 / (l * ck);
    a.a11 = -params.resistance / l;
    return a;
}

Vector2 forcing(double t, RegionId region, const CircuitParams& params) {
    Vector2 b;
    b.v0 = 0.0;
    b.v1 = (drive_voltage(t, params) - threshold_term(region, params)) /
           params.inductance;
    return b;
}

double resistor_voltage(const State& state, const CircuitParams& params) {
    return params.resistance * state.current;
}

double exponential_vector_field(double t, double current,
                                const CircuitParams& params,
                                const ExpDiodeParams& exp_params) {
    if (!(current > -exp_params.saturation_current))
        throw NumericalError("exponential diode model: current at or below -I_s, "
                             "diode voltage undefined");
    const double v_d = exp_params.emission_coefficient * exp_params.thermal_voltage *
                       std::log1p(current / exp_params.saturation_current);
    return (drive_voltage(t, params) - params.resistance * current - v_d) /
           params.inductance;
}

} // namespace rld
