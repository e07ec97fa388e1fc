#pragma once

#include <cstdint>

namespace rld {

/// Drive waveform applied through the source term E*w(omega*t).
enum class Waveform : std::uint8_t { Cosine, Sine };

/// Placement of the diode threshold drop V_i in the forcing term.
/// AlwaysOn subtracts V_i in both regions; ForwardOnly subtracts it
/// only while the diode conducts (Region2).
enum class ThresholdMode : std::uint8_t { AlwaysOn, ForwardOnly };

/// Operating region of the piecewise-linear diode model. Region1 is the
/// reverse / below-threshold branch (C1, G1), Region2 the forward branch
/// (C2, G2). The boundary q == q0 belongs to Region1.
enum class RegionId : std::uint8_t { Region1 = 1, Region2 = 2 };

/// Physical and model parameters of the driven series RLD loop.
///
/// The defaults describe the reference setup: 10 ohm, 1 mH, 100 kHz drive.
/// C1 is pinned so the reverse-region resonance sits at the drive frequency,
/// C1 = 1/(omega^2 L); C2 and G2 are chosen so the default amplitude sweep
/// walks the period-doubling route into chaos (see README).
struct CircuitParams {
    double resistance = 10.0;       ///< R, ohms
    double inductance = 1e-3;       ///< L, henries
    double drive_amplitude = 9.0;   ///< E, volts
    double drive_frequency = 1e5;   ///< f, hertz; omega = 2*pi*f
    Waveform drive_waveform = Waveform::Cosine;
    double threshold_voltage = 0.7; ///< V_i, volts
    double charge_offset = 0.0;     ///< q0, coulombs (coordinates pre-shifted)
    double cap_region1 = 2.5330295910584449e-9;  ///< C1, farads (= 1/(omega^2 L))
    double cap_region2 = 2.5330295910584449e-7;  ///< C2, farads (= 100 C1)
    double cond_region1 = 0.0;      ///< G1, siemens
    double cond_region2 = 0.05;     ///< G2, siemens
    ThresholdMode threshold_mode = ThresholdMode::AlwaysOn;

    [[nodiscard]] double omega() const;
    [[nodiscard]] double period() const { return 1.0 / drive_frequency; }

    friend bool operator==(const CircuitParams&, const CircuitParams&) = default;
};

/// Throws ValidationError naming the violated constraint.
void validate(const CircuitParams& params);

/// Capacitor charge and loop current at one time instant.
struct State {
    double charge = 0.0;  ///< q, coulombs
    double current = 0.0; ///< i, amperes
};

/// Time derivative of State.
struct StateDerivative {
    double d_charge = 0.0;  ///< dq/dt, amperes
    double d_current = 0.0; ///< di/dt, amperes/second
};

/// Row-major 2x2 matrix, the A_k of the region-k linear flow.
struct Matrix2x2 {
    double a00 = 0.0, a01 = 0.0;
    double a10 = 0.0, a11 = 0.0;
};

/// Two-component column vector, the forcing b_k(t).
struct Vector2 {
    double v0 = 0.0, v1 = 0.0;
};

/// Shockley-model constants for the exponential diode baseline.
struct ExpDiodeParams {
    double saturation_current = 1e-9;   ///< I_s, amperes
    double emission_coefficient = 1.7;  ///< n, dimensionless
    double thermal_voltage = 0.02585;   ///< V_T, volts

    friend bool operator==(const ExpDiodeParams&, const ExpDiodeParams&) = default;
};

/// Throws ValidationError naming the violated constraint.
void validate(const ExpDiodeParams& params);

/// Region selector: Region2 iff q - q0 > 0, Region1 otherwise.
/// Pure in q, single threshold, no hysteresis.
[[nodiscard]] RegionId region_of(const State& state, const CircuitParams& params);

/// Drive voltage E*w(omega*t) for the configured waveform.
[[nodiscard]] double drive_voltage(double t, const CircuitParams& params);

/// Right-hand side with the region pinned to k regardless of the state's own
/// region. The event-driven integrator steps with the region frozen at the
/// step start; this overload is that frozen field.
[[nodiscard]] StateDerivative vector_field_in_region(double t, const State& state,
                                                     RegionId k,
                                                     const CircuitParams& params);

/// Right-hand side of the piecewise-linear model:
///   dq/dt = -(G_k/C_k)(q - q0) + i
///   di/dt = -(q - q0)/(L C_k) - (R/L) i + (E w(omega t) - V_i theta)/L
/// with k = region_of(state) and theta per threshold_mode.
[[nodiscard]] StateDerivative vector_field(double t, const State& state,
                                           const CircuitParams& params);

/// A_k = [[-G_k/C_k, 1], [-1/(L C_k), -R/L]].
[[nodiscard]] Matrix2x2 system_matrix(RegionId region, const CircuitParams& params);

/// b_k(t) = (0, (E w(omega t) - V_i theta)/L) with theta = 1 (AlwaysOn)
/// or theta = [region == Region2] (ForwardOnly).
[[nodiscard]] Vector2 forcing(double t, RegionId region, const CircuitParams& params);

/// v_R = R i.
[[nodiscard]] double resistor_voltage(const State& state, const CircuitParams& params);

/// Right-hand side of the one-dimensional exponential-diode baseline:
///   di/dt = (E w(omega t) - R i - v_D(i))/L,  v_D(i) = n V_T ln(1 + i/I_s).
/// Throws NumericalError for i <= -I_s (outside the logarithm's domain);
/// clamping is deliberately not performed.
[[nodiscard]] double exponential_vector_field(double t, double current,
                                              const CircuitParams& params,
                                              const ExpDiodeParams& exp_params);

} // namespace rld
