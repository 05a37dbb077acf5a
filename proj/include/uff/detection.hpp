#pragma once

#include "uff/constants.hpp"
#include "uff/model.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace uff {

/// Doppler-sensitive Raman spectrum of the two output momentum classes.
/// Offsets are rad/s relative to the hyperfine splitting, with the |p0>
/// peak at zero.
struct RamanSpectrum {
    std::vector<double> frequency_offsets;
    std::vector<double> responses;
    double linewidth = 0.0;          // rad/s, FWHM of each Gaussian peak
    double peak_separation = 0.0;    // rad/s
    double amplitude_p0 = 0.0;
    double amplitude_p2 = 0.0;

    /// Model response at an arbitrary offset.
    double response_at(double offset) const;
};

/// Separation of the |p0> and |p0 + 2 hbar k> Raman peaks, k_eff 2 hbar k / m.
double raman_peak_separation(const PhysicalConstants& c);

/// Two Gaussian peaks with amplitudes equal to the populations, sampled on a
/// grid spanning both peaks with `points` samples.
RamanSpectrum simulate_raman_spectrum(double pop_p0, double pop_p2, const PhysicalConstants& c, double linewidth,
                                      int points = 2001);

/// Fraction in |p0 + 2 hbar k> from the two fixed-frequency peak samples.
double population_from_two_samples(double response_peak1, double response_peak2);

/// Result of a fixed-period sine fit. Phase is the interferometer phase at
/// alpha_ref, wrapped to (-pi, pi]. Covariance is ordered (offset, contrast, phase).
struct FringeFit {
    double offset = 0.0;
    double contrast = 0.0;
    double phase = 0.0;
    double alpha_ref = 0.0;
    std::array<std::array<double, 3>, 3> covariance{};
    double residual_rms = 0.0;
    std::size_t points = 0;

    double phase_sigma() const;
    double contrast_sigma() const;
    /// Acceleration consistent with the fitted phase on the fringe branch
    /// closest to g_guess.
    double gravity(const InterferometerConfig& config, double g_guess) const;
};

struct FringePoint;

/// Least-squares fit of P(alpha) = offset - (contrast/2) cos(phi_ref - n T^2 (alpha - alpha_ref))
/// with the period fixed by the configuration. alpha_ref defaults to the mean
/// chirp of the points.
FringeFit sine_fringe_fit(const std::vector<FringePoint>& points, const InterferometerConfig& config,
                          std::optional<double> alpha_ref = std::nullopt);

struct AllanSeries {
    std::vector<double> taus;
    std::vector<double> deviations;
    std::vector<std::size_t> cluster_sizes;   // averaging factor m for each tau
    double slope_fit = 0.0;          // a in a tau^(-1/2), i.e. the deviation at 1 s
    double fitted_exponent = 0.0;    // free log-log slope over the white-noise region
    std::vector<std::string> notices;
};

/// Overlapping Allan deviation. Each requested tau is rounded to a whole
/// number of samples; taus needing more than half the record are omitted with
/// a notice. The tau^(-1/2) amplitude is fitted over taus up to a tenth of the
/// record.
AllanSeries allan_deviation(const std::vector<double>& series, double sample_interval,
                            const std::vector<double>& taus);

/// Octave-spaced taus from one sample up to half the record, plus any extras.
std::vector<double> octave_taus(std::size_t length, double sample_interval, const std::vector<double>& extra = {});

struct Measured {
    double value = 0.0;
    double uncertainty = 0.0;
};

/// Inverse-variance weighted mean; the uncertainty is (sum w)^(-1/2).
Measured weighted_mean(const std::vector<double>& values, const std::vector<double>& uncertainties);

} // namespace uff
