#pragma once

#include "uff/bragg.hpp"
#include "uff/constants.hpp"
#include "uff/model.hpp"
#include "uff/rng.hpp"

#include <cstdint>
#include <vector>

namespace uff {

struct TideModel;

/// One measured point of a fringe: fraction in |p0 + 2n hbar k> at a chirp.
struct FringePoint {
    double alpha = 0.0;          // rad/s^2
    double probability = 0.0;
    int state_f = 0;
    double timestamp = 0.0;      // s
};

/// One probability point (two 1 s Raman detection shots) of the campaign.
struct ShotRecord {
    double timestamp = 0.0;      // s, start of the first detection shot
    int state_f = 0;
    double alpha = 0.0;          // rad/s^2
    double probability = 0.0;
};

struct NoiseModel {
    double per_shot_phase_sigma = 0.0;   // rad, independent per point
    double detection_sigma = 0.0;        // probability units
    double vibration_common = 0.0;       // rad, shared by the F=2/F=1 points of a pair
    double raman_linewidth = two_pi * 300.0;  // rad/s

    void validate() const;
    static NoiseModel none() { return {}; }
};

/// Per-point phase noise chosen so the paired differential measurement has
/// Allan deviation `differential_asd` (units of g at 1 s). The pair cadence is
/// four cycle times; detection noise is referred to phase at mid-fringe.
/// Throws CalibrationError if detection noise alone exceeds the target.
NoiseModel calibrate_noise(double differential_asd, double detection_sigma, double vibration_common,
                           const InterferometerConfig& config, const PhysicalConstants& c);

/// What the environment adds to each shot: tides, per-state biases and an
/// injected spin-dependent violation of strength k_tilde.
struct ShotEnvironment {
    const TideModel* tide = nullptr;
    double zeeman_bias_f1 = 0.0;   // units of g
    double zeeman_bias_f2 = 0.0;   // units of g
    double k_tilde = 0.0;
    double common_phase = 0.0;     // vibration sample of the current pair, rad

    /// Local acceleration seen by `state` at time t.
    double gravity(const HyperfineState& state, double t, const PhysicalConstants& c) const;
};

/// Frequency difference for the n-th order resonance, 2 k v_a + 4 n omega_r.
double resonance_offset(double v_a, int n, const PhysicalConstants& c);

/// n (k_eff g - alpha) T^2
double mz_phase(double g, double alpha, const InterferometerConfig& config);

/// offset - (contrast/2) cos(phi)
double transition_probability(double phi, double contrast, double offset);

/// Chirp putting the fringe at mid-slope (phase pi/2) for a predicted g.
double mid_fringe_chirp(double g_predicted, const InterferometerConfig& config);

/// Inverts a mid-fringe probability to an acceleration, taking the phase
/// branch in [0, pi] around the operating point.
double mid_fringe_gravity(double probability, double alpha, const InterferometerConfig& config);

ShotRecord simulate_shot(const HyperfineState& state, double alpha, double t, const InterferometerConfig& config,
                         const NoiseModel& noise, const ShotEnvironment& env, RngStream& rng,
                         const PhysicalConstants& c);

/// Scan the chirp across `periods` fringe periods with points_per_period
/// points each. Points are spaced one pair cadence apart, F=1 points lagging
/// F=2 points by the alternation lag.
std::vector<FringePoint> fringe_scan(const HyperfineState& state, double alpha_center,
                                     const InterferometerConfig& config, int points_per_period, int periods,
                                     const NoiseModel& noise, const ShotEnvironment& env, std::uint64_t seed,
                                     const PhysicalConstants& c, double t0 = 0.0);

/// Seconds between consecutive F=2/F=1 pairs (two states, two shots each).
double pair_period(const InterferometerConfig& config);

/// Probability after the full pi/2 - pi - pi/2 ladder propagation with the
/// given interferometer phase, read out as the |n> : |0> population ratio.
double ladder_mz_probability(double phase, const PulseWaveform& pi_pulse, const PulseWaveform& half_pi,
                             const InterferometerConfig& config, const PhysicalConstants& c,
                             double doppler_offset = 0.0);

struct PhaseCrossCheck {
    double analytic_phase = 0.0;   // wrapped to (-pi, pi]
    double ladder_phase = 0.0;     // from a sine fit to the ladder fringe
    double difference = 0.0;
    double ladder_contrast = 0.0;
};

/// Compare the closed-form phase with one extracted from ladder propagation.
PhaseCrossCheck ladder_phase_cross_check(double g, double phase_at_reference, const PulseWaveform& pi_pulse,
                                         const PulseWaveform& half_pi, const InterferometerConfig& config,
                                         const PhysicalConstants& c);

double wrap_phase(double phi);

} // namespace uff
