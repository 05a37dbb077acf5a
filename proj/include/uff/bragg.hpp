#pragma once

#include "uff/constants.hpp"
#include "uff/model.hpp"

#include <complex>
#include <vector>

namespace uff {

/// Bragg beam pair. Both beams are linearly polarized perpendicular to the
/// vertical quantization axis, so each couples through equal sigma+ and
/// sigma- components.
struct LaserField {
    double detuning = 0.0;         // Hz, laser frequency minus the F=2 -> F'=3 line
    double intensity_1 = 0.0;      // W/m^2
    double intensity_2 = 0.0;      // W/m^2
    double beam_diameter = 0.019;  // m, e^-2 diameter
    double total_power = 0.080;    // W
    double freq_difference = 0.0;  // rad/s, omega_1 - omega_2

    void validate() const;
};

/// Peak intensities of a beam pair splitting total_power in the ratio
/// intensity_1 : intensity_2 = ratio : 1.
LaserField make_laser_field(double total_power, double beam_diameter, double detuning_hz,
                            double intensity_ratio = 1.0);

/// Signed two-photon Rabi frequency (rad/s) of the m_F = 0 state, summed over
/// the 5P3/2 hyperfine levels. Throws ResonanceError within one natural
/// linewidth of an allowed excited level.
double two_photon_rabi(const HyperfineState& state, const LaserField& field, const PhysicalConstants& c);

/// Single-photon light shift (rad/s) summed over both beams.
double single_photon_light_shift(const HyperfineState& state, const LaserField& field,
                                 const PhysicalConstants& c);

/// Default search bracket for the balanced detuning (Hz from F=2 -> F'=3).
inline constexpr double balanced_bracket_low = 1.0e9;
inline constexpr double balanced_bracket_high = 5.5e9;

/// Detuning (Hz) at which |Omega_F=1| = |Omega_F=2|. Throws NoSolutionError
/// when the bracket holds no sign change.
double balanced_detuning_solve(const LaserField& field_template, const PhysicalConstants& c,
                               double bracket_low = balanced_bracket_low,
                               double bracket_high = balanced_bracket_high);

/// Amplitudes over the ladder |p0 + 2 m hbar k>, m in [-M, M].
struct MomentumLadderState {
    int max_order = 0;
    std::vector<std::complex<double>> amplitudes;
    double reference_momentum = 0.0;

    static MomentumLadderState ground(int max_order, double reference_momentum = 0.0);

    std::complex<double>& at(int m) { return amplitudes[static_cast<std::size_t>(m + max_order)]; }
    const std::complex<double>& at(int m) const { return amplitudes[static_cast<std::size_t>(m + max_order)]; }
    double population(int m) const { return std::norm(at(m)); }
    double norm() const;
};

/// Gaussian Rabi envelope Omega(t) = peak_rabi exp(-t^2 / 2 sigma^2), cut at
/// +-truncation sigma.
struct PulseWaveform {
    double sigma = 0.0;
    double peak_rabi = 0.0;
    double truncation = 4.0;

    double rabi(double t) const;
    /// Area of the untruncated envelope, peak_rabi sigma sqrt(2 pi).
    double area() const;
    void validate() const;
};

/// Integrate the coupled ladder equations through one pulse. doppler_offset
/// is the two-photon detuning 2 k dv of the atom from the resonant class;
/// laser_phase multiplies the raising coupling by exp(i phase).
MomentumLadderState propagate_pulse(const MomentumLadderState& psi, const PulseWaveform& w,
                                    const InterferometerConfig& config, const PhysicalConstants& c,
                                    double doppler_offset, double laser_phase = 0.0);

/// Probability of ending in |p0 + 2n hbar k> from |p0>.
double transfer_probability(const PulseWaveform& w, const InterferometerConfig& config,
                            const PhysicalConstants& c, double doppler_offset);

/// Peak Rabi frequency maximizing resonant transfer of a zero-spread atom.
PulseWaveform calibrate_pi_pulse(double sigma, const InterferometerConfig& config, const PhysicalConstants& c);

/// Beam splitter from a calibrated pi pulse: half the pulse area, then
/// refined so the zero-spread transfer is exactly one half.
PulseWaveform half_pi_pulse(const PulseWaveform& pi_pulse, const InterferometerConfig& config,
                            const PhysicalConstants& c);

/// Doppler offset (rad/s) of an atom displaced by q hbar k from the resonant class.
double doppler_offset_for_momentum(double q_hbar_k, const PhysicalConstants& c);

/// Transfer averaged over a Gaussian momentum distribution whose e^-2
/// half-width is momentum_width (sigma = width / 2), using a deterministic
/// midpoint-quantile rule with `samples` nodes.
double diffraction_efficiency(const PulseWaveform& w, double momentum_width, int samples,
                              const InterferometerConfig& config, const PhysicalConstants& c);

} // namespace uff
