#include "uff/detection.hpp"

#include "uff/errors.hpp"
#include "uff/interferometer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace uff {
namespace {

double gaussian_sigma_from_fwhm(double fwhm)
{
    return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

} // namespace

double RamanSpectrum::response_at(double offset) const
{
    const double s = gaussian_sigma_from_fwhm(linewidth);
    const double d0 = offset / s;
    const double d2 = (offset - peak_separation) / s;
    return amplitude_p0 * std::exp(-0.5 * d0 * d0) + amplitude_p2 * std::exp(-0.5 * d2 * d2);
}

double raman_peak_separation(const PhysicalConstants& c)
{
    return c.k_eff() * c.two_photon_recoil_velocity();
}

RamanSpectrum simulate_raman_spectrum(double pop_p0, double pop_p2, const PhysicalConstants& c, double linewidth,
                                      int points)
{
    if (pop_p0 < 0.0 || pop_p2 < 0.0 || pop_p0 + pop_p2 > 1.0 + 1e-12) {
        throw DomainError("populations must be non-negative with sum <= 1");
    }
    if (!(linewidth > 0.0) || points < 2) {
        throw DomainError("spectrum needs a positive linewidth and at least two samples");
    }
    RamanSpectrum s;
    s.linewidth = linewidth;
    s.peak_separation = raman_peak_separation(c);
    s.amplitude_p0 = pop_p0;
    s.amplitude_p2 = pop_p2;
    const double lo = -0.5 * s.peak_separation;
    const double hi = 1.5 * s.peak_separation;
    s.frequency_offsets.resize(static_cast<std::size_t>(points));
    s.responses.resize(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double w = lo + (hi - lo) * i / (points - 1);
        s.frequency_offsets[static_cast<std::size_t>(i)] = w;
        s.responses[static_cast<std::size_t>(i)] = s.response_at(w);
    }
    return s;
}

double population_from_two_samples(double response_peak1, double response_peak2)
{
    if (response_peak1 < 0.0 || response_peak2 < 0.0) {
        throw DomainError("Raman responses must be non-negative");
    }
    const double total = response_peak1 + response_peak2;
    if (total == 0.0) {
        throw DomainError("both Raman responses are zero; probability undefined");
    }
    return response_peak2 / total;
}

double FringeFit::phase_sigma() const
{
    return std::sqrt(covariance[2][2]);
}

double FringeFit::contrast_sigma() const
{
    return std::sqrt(covariance[1][1]);
}

double FringeFit::gravity(const InterferometerConfig& config, double g_guess) const
{
    const double nt2 = config.bragg_order * config.pulse_separation * config.pulse_separation;
    const double base = (alpha_ref + phase / nt2) / config.k_eff;
    // fringe branches are spaced by 2 pi / (n k_eff T^2) in g
    const double branch = two_pi / (nt2 * config.k_eff);
    const double k = std::round((g_guess - base) / branch);
    return base + k * branch;
}

FringeFit sine_fringe_fit(const std::vector<FringePoint>& points, const InterferometerConfig& config,
                          std::optional<double> alpha_ref)
{
    const std::size_t n = points.size();
    if (n < 5) {
        throw FitError("fringe fit needs at least 5 points");
    }
    const double ref = alpha_ref.value_or(std::accumulate(points.begin(), points.end(), 0.0,
                                                          [](double acc, const FringePoint& p) {
                                                              return acc + p.alpha;
                                                          })
                                          / static_cast<double>(n));
    const double nt2 = config.bragg_order * config.pulse_separation * config.pulse_separation;

    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 3);
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = nt2 * (points[i].alpha - ref);
        const auto row = static_cast<Eigen::Index>(i);
        design(row, 0) = 1.0;
        design(row, 1) = std::cos(theta);
        design(row, 2) = std::sin(theta);
        y(row) = points[i].probability;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) {
        throw FitError("rank-deficient fringe design (chirps do not span the fringe)");
    }
    const Eigen::Vector3d beta = qr.solve(y);
    const Eigen::VectorXd resid = y - design * beta;
    const double rss = resid.squaredNorm();
    const double dof = static_cast<double>(n) - 3.0;
    const double s2 = dof > 0.0 ? rss / dof : 0.0;
    const Eigen::Matrix3d normal_inv = (design.transpose() * design).inverse();
    const Eigen::Matrix3d cov_beta = s2 * normal_inv;

    FringeFit fit;
    fit.alpha_ref = ref;
    fit.points = n;
    fit.residual_rms = std::sqrt(rss / static_cast<double>(n));
    const double a1 = beta(1);
    const double a2 = beta(2);
    const double r = std::hypot(a1, a2);
    fit.offset = beta(0);
    fit.contrast = 2.0 * r;
    if (!(r > 1e-12)) {
        throw UnconstrainedPhaseError("fringe contrast is zero; phase is unconstrained");
    }
    fit.phase = std::atan2(-a2, -a1);

    Eigen::Matrix3d jac = Eigen::Matrix3d::Zero();
    jac(0, 0) = 1.0;
    jac(1, 1) = 2.0 * a1 / r;
    jac(1, 2) = 2.0 * a2 / r;
    jac(2, 1) = -a2 / (r * r);
    jac(2, 2) = a1 / (r * r);
    const Eigen::Matrix3d cov = jac * cov_beta * jac.transpose();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            fit.covariance[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cov(i, j);
        }
    }
    if (fit.phase_sigma() > pi) {
        throw UnconstrainedPhaseError("fringe phase uncertainty exceeds pi; contrast not resolved");
    }
    return fit;
}

std::vector<double> octave_taus(std::size_t length, double sample_interval, const std::vector<double>& extra)
{
    std::vector<double> taus;
    for (std::size_t m = 1; 2 * m <= length; m *= 2) {
        taus.push_back(static_cast<double>(m) * sample_interval);
    }
    taus.insert(taus.end(), extra.begin(), extra.end());
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    return taus;
}

AllanSeries allan_deviation(const std::vector<double>& series, double sample_interval, const std::vector<double>& taus)
{
    if (!(sample_interval > 0.0)) {
        throw DomainError("sample interval must be positive");
    }
    AllanSeries out;
    const std::size_t n = series.size();
    if (n < 2) {
        out.notices.push_back("series shorter than two samples; no deviations computed");
        return out;
    }

    // Prefix sums of the series relative to its first sample, so a constant
    // input gives exact zeros.
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + (series[i] - series[0]);
    }

    std::vector<std::size_t> sizes;
    for (double tau : taus) {
        const auto m = static_cast<std::size_t>(std::llround(tau / sample_interval));
        if (m < 1) {
            out.notices.push_back("tau " + std::to_string(tau) + " s is below the sample interval; omitted");
            continue;
        }
        if (2 * m > n) {
            out.notices.push_back("tau " + std::to_string(tau) + " s needs " + std::to_string(2 * m)
                                  + " samples, have " + std::to_string(n) + "; omitted");
            continue;
        }
        if (!sizes.empty() && m <= sizes.back()) {
            continue;
        }
        sizes.push_back(m);
    }

    for (std::size_t m : sizes) {
        const std::size_t terms = n - 2 * m + 1;
        double sum = 0.0;
        for (std::size_t j = 0; j < terms; ++j) {
            const double first = prefix[j + m] - prefix[j];
            const double second = prefix[j + 2 * m] - prefix[j + m];
            const double d = (second - first) / static_cast<double>(m);
            sum += d * d;
        }
        out.taus.push_back(static_cast<double>(m) * sample_interval);
        out.deviations.push_back(std::sqrt(sum / (2.0 * static_cast<double>(terms))));
        out.cluster_sizes.push_back(m);
    }

    // tau^(-1/2) law over the well-sampled part of the curve
    double wsum = 0.0;
    double log_a = 0.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t used = 0;
    bool zero = false;
    for (std::size_t i = 0; i < out.taus.size(); ++i) {
        const std::size_t m = out.cluster_sizes[i];
        if (10 * m > n) {
            continue;
        }
        if (out.deviations[i] <= 0.0) {
            zero = true;
            break;
        }
        const double w = static_cast<double>(n - 2 * m + 1) / static_cast<double>(m);
        const double x = std::log(out.taus[i]);
        const double yv = std::log(out.deviations[i]);
        wsum += w;
        log_a += w * (yv + 0.5 * x);
        sx += w * x;
        sy += w * yv;
        sxx += w * x * x;
        sxy += w * x * yv;
        ++used;
    }
    if (zero) {
        out.notices.push_back("zero deviation in the white-noise region; no slope fit");
    } else if (used == 0) {
        out.notices.push_back("no taus in the white-noise region; no slope fit");
    } else {
        out.slope_fit = std::exp(log_a / wsum);
        const double det = wsum * sxx - sx * sx;
        out.fitted_exponent = used >= 2 && det > 0.0 ? (wsum * sxy - sx * sy) / det : -0.5;
    }
    return out;
}

Measured weighted_mean(const std::vector<double>& values, const std::vector<double>& uncertainties)
{
    if (values.empty()) {
        throw DomainError("weighted mean of an empty set");
    }
    if (values.size() != uncertainties.size()) {
        throw DomainError("values and uncertainties differ in length");
    }
    double wsum = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(uncertainties[i] > 0.0)) {
            throw DomainError("uncertainties must be positive");
        }
        const double w = 1.0 / (uncertainties[i] * uncertainties[i]);
        wsum += w;
        acc += w * values[i];
    }
    return {acc / wsum, 1.0 / std::sqrt(wsum)};
}

} // namespace uff
