#include "uff/interferometer.hpp"

#include "uff/detection.hpp"
#include "uff/errors.hpp"
#include "uff/systematics.hpp"

#include <algorithm>
#include <cmath>

namespace uff {

void NoiseModel::validate() const
{
    if (per_shot_phase_sigma < 0.0 || detection_sigma < 0.0 || vibration_common < 0.0) {
        throw DomainError("noise amplitudes must be non-negative");
    }
    if (!(raman_linewidth > 0.0)) {
        throw DomainError("Raman linewidth must be positive");
    }
}

double pair_period(const InterferometerConfig& config)
{
    return 2.0 * config.alternation_lag;
}

NoiseModel calibrate_noise(double differential_asd, double detection_sigma, double vibration_common,
                           const InterferometerConfig& config, const PhysicalConstants& c)
{
    if (differential_asd < 0.0 || detection_sigma < 0.0 || vibration_common < 0.0) {
        throw DomainError("noise targets must be non-negative");
    }
    config.validate();
    const double per_pair = differential_asd / std::sqrt(pair_period(config));
    const double per_point_phase = per_pair * c.g_nominal * config.scale_factor() / std::sqrt(2.0);
    const double detection_phase = detection_sigma / (0.5 * config.contrast);
    if (detection_phase > per_point_phase) {
        throw CalibrationError("detection noise alone exceeds the differential noise target");
    }
    NoiseModel noise;
    noise.detection_sigma = detection_sigma;
    noise.vibration_common = vibration_common;
    noise.per_shot_phase_sigma = std::sqrt(per_point_phase * per_point_phase - detection_phase * detection_phase);
    return noise;
}

double ShotEnvironment::gravity(const HyperfineState& state, double t, const PhysicalConstants& c) const
{
    const double bias = state.f_number == 1 ? zeeman_bias_f1 : zeeman_bias_f2;
    double g = c.g_nominal * (1.0 + k_tilde * state.spin_perp_sq + bias);
    if (tide != nullptr) {
        g += tide_g(t, *tide);
    }
    return g;
}

double resonance_offset(double v_a, int n, const PhysicalConstants& c)
{
    return 2.0 * c.wavenumber * v_a + 4.0 * n * c.recoil_omega;
}

double mz_phase(double g, double alpha, const InterferometerConfig& config)
{
    const double t2 = config.pulse_separation * config.pulse_separation;
    return config.bragg_order * (config.k_eff * g - alpha) * t2;
}

double transition_probability(double phi, double contrast, double offset)
{
    return offset - 0.5 * contrast * std::cos(phi);
}

double mid_fringe_chirp(double g_predicted, const InterferometerConfig& config)
{
    const double nt2 = config.bragg_order * config.pulse_separation * config.pulse_separation;
    return config.k_eff * g_predicted - 0.5 * pi / nt2;
}

double mid_fringe_gravity(double probability, double alpha, const InterferometerConfig& config)
{
    if (!(config.contrast > 0.0)) {
        throw DomainError("zero contrast: probability carries no phase");
    }
    const double x = std::clamp((config.offset - probability) / (0.5 * config.contrast), -1.0, 1.0);
    const double phi = std::acos(x);
    const double nt2 = config.bragg_order * config.pulse_separation * config.pulse_separation;
    return (alpha + phi / nt2) / config.k_eff;
}

ShotRecord simulate_shot(const HyperfineState& state, double alpha, double t, const InterferometerConfig& config,
                         const NoiseModel& noise, const ShotEnvironment& env, RngStream& rng,
                         const PhysicalConstants& c)
{
    const double g = env.gravity(state, t, c);
    const double phi = mz_phase(g, alpha, config) + env.common_phase + rng.normal(noise.per_shot_phase_sigma);
    const double p = transition_probability(phi, config.contrast, config.offset);

    // two Raman shots, one parked on each Doppler peak
    RamanSpectrum spectrum;
    spectrum.linewidth = noise.raman_linewidth;
    spectrum.peak_separation = raman_peak_separation(c);
    spectrum.amplitude_p0 = 1.0 - p;
    spectrum.amplitude_p2 = p;
    const double sigma_r = std::sqrt(2.0) * noise.detection_sigma;
    const double r1 = std::max(0.0, spectrum.response_at(0.0) + rng.normal(sigma_r));
    const double r2 = std::max(0.0, spectrum.response_at(spectrum.peak_separation) + rng.normal(sigma_r));

    ShotRecord rec;
    rec.timestamp = t;
    rec.state_f = state.f_number;
    rec.alpha = alpha;
    rec.probability = population_from_two_samples(r1, r2);
    return rec;
}

std::vector<FringePoint> fringe_scan(const HyperfineState& state, double alpha_center,
                                     const InterferometerConfig& config, int points_per_period, int periods,
                                     const NoiseModel& noise, const ShotEnvironment& env, std::uint64_t seed,
                                     const PhysicalConstants& c, double t0)
{
    if (points_per_period < 1 || periods < 1) {
        throw DomainError("fringe scan needs at least one point per period and one period");
    }
    config.validate();
    noise.validate();
    const int total = points_per_period * periods;
    const double period = config.fringe_period();
    const double cadence = pair_period(config);
    const double lag = state.f_number == 1 ? config.alternation_lag : 0.0;

    std::vector<FringePoint> out;
    out.reserve(static_cast<std::size_t>(total));
    for (int i = 0; i < total; ++i) {
        const auto index = static_cast<std::uint64_t>(i);
        const double alpha = alpha_center + period * (static_cast<double>(i) / points_per_period - 0.5 * periods);
        const double t = t0 + i * cadence + lag;
        ShotEnvironment shot_env = env;
        RngStream vib(seed, index, 0);
        shot_env.common_phase = env.common_phase + vib.normal(noise.vibration_common);
        RngStream rng(seed, index, static_cast<std::uint64_t>(state.f_number));
        const ShotRecord rec = simulate_shot(state, alpha, t, config, noise, shot_env, rng, c);
        out.push_back({rec.alpha, rec.probability, rec.state_f, rec.timestamp});
    }
    return out;
}

double ladder_mz_probability(double phase, const PulseWaveform& pi_pulse, const PulseWaveform& half_pi,
                             const InterferometerConfig& config, const PhysicalConstants& c, double doppler_offset)
{
    const int big_m = config.ladder_half_width;
    const int order = config.bragg_order;
    const double gap = config.pulse_separation - half_pi.truncation * half_pi.sigma - pi_pulse.truncation * pi_pulse.sigma;
    if (gap < 0.0) {
        throw DomainError("pulses overlap: T shorter than the pulse envelopes");
    }
    auto drift = [&](MomentumLadderState& s) {
        for (int m = -big_m; m <= big_m; ++m) {
            const double e = 4.0 * c.recoil_omega * (static_cast<double>(m) * m - static_cast<double>(order) * m)
                             + m * doppler_offset;
            // orders other than the two arms separate from the cloud and never close
            s.at(m) = (m == 0 || m == order) ? s.at(m) * std::polar(1.0, -e * gap) : 0.0;
        }
        const double kept = s.norm();
        for (auto& a : s.amplitudes) {
            a /= std::sqrt(kept);
        }
    };
    MomentumLadderState s = MomentumLadderState::ground(big_m);
    s = propagate_pulse(s, half_pi, config, c, doppler_offset, 0.0);
    drift(s);
    s = propagate_pulse(s, pi_pulse, config, c, doppler_offset, 0.0);
    drift(s);
    s = propagate_pulse(s, half_pi, config, c, doppler_offset, -phase);
    const double p0 = s.population(0);
    const double pn = s.population(order);
    if (!(p0 + pn > 0.0)) {
        throw IntegrationError("no population left in the output ports");
    }
    return pn / (p0 + pn);
}

double wrap_phase(double phi)
{
    double w = std::remainder(phi, two_pi);
    if (w <= -pi) {
        w += two_pi;
    }
    return w;
}

PhaseCrossCheck ladder_phase_cross_check(double g, double phase_at_reference, const PulseWaveform& pi_pulse,
                                         const PulseWaveform& half_pi, const InterferometerConfig& config,
                                         const PhysicalConstants& c)
{
    const double nt2 = config.bragg_order * config.pulse_separation * config.pulse_separation;
    const double alpha_ref = config.k_eff * g - phase_at_reference / nt2;
    const int samples = 16;
    std::vector<FringePoint> points;
    for (int i = 0; i < samples; ++i) {
        const double alpha = alpha_ref + config.fringe_period() * (static_cast<double>(i) / samples - 0.5);
        const double phi = mz_phase(g, alpha, config);
        points.push_back({alpha, ladder_mz_probability(phi, pi_pulse, half_pi, config, c), 0, 0.0});
    }
    const FringeFit fit = sine_fringe_fit(points, config, alpha_ref);
    PhaseCrossCheck out;
    out.analytic_phase = wrap_phase(phase_at_reference);
    out.ladder_phase = fit.phase;
    out.difference = wrap_phase(out.ladder_phase - out.analytic_phase);
    out.ladder_contrast = fit.contrast;
    return out;
}

} // namespace uff
