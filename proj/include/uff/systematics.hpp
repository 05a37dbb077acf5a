#pragma once

#include "uff/bragg.hpp"
#include "uff/constants.hpp"
#include "uff/model.hpp"

#include <array>
#include <string>
#include <vector>

namespace uff {

/// Field magnitude on a strictly increasing z grid. The solenoid part of the
/// field (total minus residual) scales linearly with the bias current.
/// B^2 is interpolated linearly between grid nodes.
class MagneticProfile {
public:
    MagneticProfile(std::vector<double> z, std::vector<double> field, std::vector<double> residual,
                    double nominal_current, double bias_scale);

    /// Uniform field over [z_lo, z_hi].
    static MagneticProfile uniform(double z_lo, double z_hi, double field, double nominal_current = 0.1,
                                   double bias_scale = 9e-5);

    /// Same geometry, solenoid part rescaled to another current.
    MagneticProfile at_current(double current) const;

    /// Same geometry, B^2 shifted by a constant at every node.
    MagneticProfile with_offset_squared(double b2_offset) const;

    double field_squared(double z) const;
    double field(double z) const;
    double z_min() const { return z_.front(); }
    double z_max() const { return z_.back(); }
    double nominal_current() const { return nominal_current_; }
    /// T/A, field per unit solenoid current
    double bias_scale() const { return bias_scale_; }
    /// Solenoid field at the nominal current, bias_scale * current.
    double bias_field() const { return bias_scale_ * nominal_current_; }

    const std::vector<double>& z() const { return z_; }
    const std::vector<double>& field_samples() const { return field_; }
    const std::vector<double>& residual_samples() const { return residual_; }

private:
    std::vector<double> z_;
    std::vector<double> field_;
    std::vector<double> residual_;
    std::vector<double> field_sq_;
    double nominal_current_;
    double bias_scale_;
};

/// Parameters of the shipped synthetic profile: solenoid field
/// bias_scale I (1 + gradient tanh((z - z_s)/L_s)) plus a Gaussian residual.
struct SyntheticProfileShape {
    double z_lo = 0.40;
    double z_hi = 0.75;
    double spacing = 1e-3;
    double bias_scale = 9e-5;       // T/A, 90 mG at 100 mA
    double nominal_current = 0.1;   // A
    double solenoid_gradient = 0.0; // dimensionless, calibrated
    double solenoid_center = 0.60;
    double solenoid_length = 0.10;
    double residual_peak = 3e-8;    // T
    double residual_center = 0.50;
    double residual_width = 0.15;
};

MagneticProfile synthetic_profile(const SyntheticProfileShape& shape);

/// The calibrated default: differential Zeeman bias -2.1e-10 g at 100 mA.
SyntheticProfileShape default_profile_shape();
MagneticProfile default_magnetic_profile();

struct TideConstituent {
    std::string name;
    double omega = 0.0;       // rad/s
    double amplitude = 0.0;   // m/s^2
    double phase = 0.0;       // rad
};

struct TideModel {
    std::vector<TideConstituent> constituents;
    double site_offset = 0.0; // m/s^2

    void validate() const;
    double longest_period() const;
};

/// Six principal lines (M2, S2, N2, K1, O1, P1) with mid-latitude body-tide
/// gravity amplitudes, all in phase at t = 0 (start of the record at low tide).
TideModel default_tide_model();

enum class Channel { statistical, quadratic_zeeman, ac_stark, two_photon_light_shift, tide, gravity_gradient,
                     coriolis, wavefront };

std::string channel_name(Channel channel);

struct SystematicShift {
    Channel channel = Channel::statistical;
    double value = 0.0;         // units of g
    double uncertainty = 0.0;   // units of g
    std::string note;
};

/// sign(F) (h K_q / 2) B^2 for the m_F = 0 state.
double zeeman_potential(const HyperfineState& state, double field, const PhysicalConstants& c);

/// First-order acceleration bias (units of g) of one state from the
/// two-arm potential difference integrated along the trajectory.
double zeeman_bias(const MagneticProfile& profile, const Trajectory& trajectory, const HyperfineState& state,
                   const InterferometerConfig& config, const PhysicalConstants& c);

/// zeeman_bias(F=1) - zeeman_bias(F=2)
double zeeman_differential_bias(const MagneticProfile& profile, const Trajectory& trajectory,
                                const InterferometerConfig& config, const PhysicalConstants& c);

struct ModulationPoint {
    double current = 0.0;      // A
    double bias_field = 0.0;   // T
    double delta_g = 0.0;      // units of g
};

struct ModulationCurve {
    std::vector<ModulationPoint> points;
    // delta_g ~ c0 + c1 I + c2 I^2
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

/// Differential bias versus solenoid current with a quadratic fit. Needs at
/// least three distinct currents.
ModulationCurve zeeman_modulation_curve(const MagneticProfile& profile, const std::vector<double>& currents,
                                        const InterferometerConfig& config, const PhysicalConstants& c);

/// Quadratic least-squares fit c0 + c1 x + c2 x^2.
std::array<double, 3> fit_quadratic(const std::vector<double>& x, const std::vector<double>& y);

/// Upper bound on the differential light-shift bias. Single-photon shifts of
/// the two states are opposite at the balanced detuning, so an arm-to-arm
/// intensity difference at the pi pulse (arms separated) survives in the
/// differential; the shift per state is taken equal to the two-photon Rabi
/// frequency, which holds for equal beam intensities. Pulses 1 and 3 act on
/// overlapped arms, so a pulse-to-pulse intensity change only enters through
/// the Bragg diffraction phase of the pi/2 pulse; no cancellation between
/// the states is assumed. peak_rabi is the pi-pulse peak.
SystematicShift ac_stark_bound(double intensity_gradient_fraction, double pulse_imbalance_fraction,
                               double peak_rabi, const InterferometerConfig& config, const PhysicalConstants& c);

/// d(diffraction phase)/d(ln Omega) of a single pulse from |0>, by central
/// differences of the ladder propagation.
double diffraction_phase_sensitivity(const PulseWaveform& pulse, const InterferometerConfig& config,
                                     const PhysicalConstants& c);

/// Two-photon light shift from a laser frequency error: the Rabi mismatch
/// d(|Omega_1| - |Omega_2|)/dDelta times the error, turned into a phase
/// through the Bragg diffraction-phase sensitivity of the pi/2 pulse.
/// Signed: odd in freq_error to first order.
SystematicShift two_photon_light_shift_bound(double freq_error, const LaserField& balanced_field,
                                             const PulseWaveform& half_pi, const InterferometerConfig& config,
                                             const PhysicalConstants& c);

/// Fractional Rabi mismatch (|Omega_1| - |Omega_2|) / |Omega_1| at a detuning.
double rabi_mismatch(const LaserField& field, const PhysicalConstants& c);

/// Sum of amplitude cos(omega t + phase) + site_offset.
double tide_g(double t, const TideModel& model);
double tide_g_rate(double t, const TideModel& model);

/// Mean of tide_g(t + lag) - tide_g(t) over [0, window] in units of g; the
/// uncertainty field carries the largest single-point difference in the
/// window. Throws DomainError when the window is shorter than the longest
/// constituent period.
SystematicShift tide_alternation_bias(const TideModel& model, double lag, double window, double g_unit);

} // namespace uff
