#include "uff/systematics.hpp"

#include "uff/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace uff {

MagneticProfile::MagneticProfile(std::vector<double> z, std::vector<double> field, std::vector<double> residual,
                                 double nominal_current, double bias_scale)
    : z_(std::move(z)), field_(std::move(field)), residual_(std::move(residual)), nominal_current_(nominal_current),
      bias_scale_(bias_scale)
{
    if (z_.size() < 2 || field_.size() != z_.size()) {
        throw DomainError("magnetic profile needs at least two samples with matching z and B columns");
    }
    if (residual_.empty()) {
        residual_.assign(z_.size(), 0.0);
    }
    if (residual_.size() != z_.size()) {
        throw DomainError("residual column length differs from z");
    }
    for (std::size_t i = 1; i < z_.size(); ++i) {
        if (!(z_[i] > z_[i - 1])) {
            throw DomainError("profile z grid must be strictly increasing");
        }
    }
    if (!(nominal_current > 0.0)) {
        throw DomainError("nominal current must be positive");
    }
    field_sq_.resize(field_.size());
    for (std::size_t i = 0; i < field_.size(); ++i) {
        if (!std::isfinite(field_[i]) || field_[i] < 0.0) {
            throw DomainError("field magnitudes must be finite and non-negative");
        }
        field_sq_[i] = field_[i] * field_[i];
    }
}

MagneticProfile MagneticProfile::uniform(double z_lo, double z_hi, double field, double nominal_current,
                                         double bias_scale)
{
    return MagneticProfile({z_lo, z_hi}, {field, field}, {0.0, 0.0}, nominal_current, bias_scale);
}

MagneticProfile MagneticProfile::at_current(double current) const
{
    if (current < 0.0) {
        throw DomainError("solenoid current must be non-negative");
    }
    std::vector<double> b(field_.size());
    const double scale = current / nominal_current_;
    for (std::size_t i = 0; i < b.size(); ++i) {
        b[i] = std::abs(residual_[i] + (field_[i] - residual_[i]) * scale);
    }
    // at zero current only the residual is left; the nominal current is kept
    return MagneticProfile(z_, std::move(b), residual_, current > 0.0 ? current : nominal_current_, bias_scale_);
}

MagneticProfile MagneticProfile::with_offset_squared(double b2_offset) const
{
    std::vector<double> b(field_.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double sq = field_sq_[i] + b2_offset;
        if (sq < 0.0) {
            throw DomainError("B^2 offset drives the field squared negative");
        }
        b[i] = std::sqrt(sq);
    }
    return MagneticProfile(z_, std::move(b), residual_, nominal_current_, bias_scale_);
}

double MagneticProfile::field_squared(double z) const
{
    if (z < z_.front() || z > z_.back()) {
        throw DomainError("z = " + std::to_string(z) + " m is outside the magnetic profile");
    }
    auto it = std::upper_bound(z_.begin(), z_.end(), z);
    std::size_t hi = static_cast<std::size_t>(it - z_.begin());
    if (hi >= z_.size()) {
        return field_sq_.back();
    }
    const std::size_t lo = hi - 1;
    const double f = (z - z_[lo]) / (z_[hi] - z_[lo]);
    return field_sq_[lo] + f * (field_sq_[hi] - field_sq_[lo]);
}

double MagneticProfile::field(double z) const
{
    return std::sqrt(field_squared(z));
}

MagneticProfile synthetic_profile(const SyntheticProfileShape& shape)
{
    if (!(shape.spacing > 0.0) || !(shape.z_hi > shape.z_lo)) {
        throw DomainError("synthetic profile needs z_hi > z_lo and a positive spacing");
    }
    const auto n = static_cast<std::size_t>(std::llround((shape.z_hi - shape.z_lo) / shape.spacing)) + 1;
    std::vector<double> z(n), b(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = shape.z_lo + static_cast<double>(i) * shape.spacing;
        const double sol = shape.bias_scale * shape.nominal_current
                           * (1.0 + shape.solenoid_gradient * std::tanh((z[i] - shape.solenoid_center)
                                                                        / shape.solenoid_length));
        const double u = (z[i] - shape.residual_center) / shape.residual_width;
        r[i] = shape.residual_peak * std::exp(-0.5 * u * u);
        b[i] = sol + r[i];
    }
    return MagneticProfile(std::move(z), std::move(b), std::move(r), shape.nominal_current, shape.bias_scale);
}

SyntheticProfileShape default_profile_shape()
{
    SyntheticProfileShape shape;
    shape.solenoid_gradient = 7.52627e-3;
    return shape;
}

MagneticProfile default_magnetic_profile()
{
    return synthetic_profile(default_profile_shape());
}

void TideModel::validate() const
{
    for (const auto& k : constituents) {
        if (!(k.omega > 0.0) || !std::isfinite(k.amplitude) || !std::isfinite(k.phase)) {
            throw DomainError("tide constituent '" + k.name + "' needs omega > 0 and finite amplitude and phase");
        }
    }
    if (!std::isfinite(site_offset)) {
        throw DomainError("tide site offset must be finite");
    }
}

double TideModel::longest_period() const
{
    double longest = 0.0;
    for (const auto& k : constituents) {
        longest = std::max(longest, two_pi / k.omega);
    }
    return longest;
}

TideModel default_tide_model()
{
    constexpr double per_day = two_pi / 86400.0;
    constexpr double micro_gal = 1e-8;
    TideModel model;
    model.constituents = {
        {"M2", 1.9322736 * per_day, 52.0 * micro_gal, pi},
        {"S2", 2.0000000 * per_day, 24.0 * micro_gal, pi},
        {"N2", 1.8959820 * per_day, 10.0 * micro_gal, pi},
        {"K1", 1.0027379 * per_day, 33.0 * micro_gal, pi},
        {"O1", 0.9295357 * per_day, 24.0 * micro_gal, pi},
        {"P1", 0.9972621 * per_day, 11.0 * micro_gal, pi},
    };
    return model;
}

std::string channel_name(Channel channel)
{
    switch (channel) {
    case Channel::statistical: return "Statistical uncertainty";
    case Channel::quadratic_zeeman: return "Quadratic Zeeman shift";
    case Channel::ac_stark: return "AC Stark shift";
    case Channel::two_photon_light_shift: return "Two-photon light shift";
    case Channel::tide: return "Tide effect";
    case Channel::gravity_gradient: return "Gravity gradient";
    case Channel::coriolis: return "Coriolis effect";
    case Channel::wavefront: return "Wavefront aberration";
    }
    return "unknown";
}

double zeeman_potential(const HyperfineState& state, double field, const PhysicalConstants& c)
{
    return state.zeeman_sign * 0.5 * c.planck * c.clock_quadratic_coeff * field * field;
}

namespace {

// composite Simpson over [a, b] with an even number of intervals
template <typename F>
double simpson(F&& f, double a, double b, int intervals)
{
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) {
        sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

} // namespace

double zeeman_bias(const MagneticProfile& profile, const Trajectory& trajectory, const HyperfineState& state,
                   const InterferometerConfig& config, const PhysicalConstants& c)
{
    if (trajectory.z_min() < profile.z_min() || trajectory.z_max() > profile.z_max()) {
        throw DomainError("trajectory spans [" + std::to_string(trajectory.z_min()) + ", "
                          + std::to_string(trajectory.z_max()) + "] m, outside the magnetic profile");
    }
    const double coupling = state.zeeman_sign * 0.5 * c.planck * c.clock_quadratic_coeff;
    auto du = [&](double t) {
        return coupling * (profile.field_squared(trajectory.z_upper(t)) - profile.field_squared(trajectory.z_lower(t)));
    };
    const double T = trajectory.pulse_separation();
    // the arms have a kink at the pi pulse, so integrate each half separately
    constexpr int intervals = 4000;
    const double integral = simpson(du, 0.0, T, intervals) + simpson(du, T, 2.0 * T, intervals);
    const double phase = integral / c.hbar;
    return phase / config.scale_factor() / c.g_nominal;
}

double zeeman_differential_bias(const MagneticProfile& profile, const Trajectory& trajectory,
                                const InterferometerConfig& config, const PhysicalConstants& c)
{
    return zeeman_bias(profile, trajectory, state_f1, config, c) - zeeman_bias(profile, trajectory, state_f2, config, c);
}

std::array<double, 3> fit_quadratic(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 3) {
        throw DomainError("quadratic fit needs at least three (x, y) pairs");
    }
    const auto n = static_cast<Eigen::Index>(x.size());
    // scale x to order one to keep the design well conditioned
    double scale = 0.0;
    for (double v : x) {
        scale = std::max(scale, std::abs(v));
    }
    if (scale == 0.0) {
        throw FitError("quadratic fit abscissae are all zero");
    }
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = x[static_cast<std::size_t>(i)] / scale;
        a(i, 0) = 1.0;
        a(i, 1) = u;
        a(i, 2) = u * u;
        b(i) = y[static_cast<std::size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < 3) {
        throw FitError("quadratic fit is rank-deficient");
    }
    const Eigen::Vector3d p = qr.solve(b);
    return {p(0), p(1) / scale, p(2) / (scale * scale)};
}

ModulationCurve zeeman_modulation_curve(const MagneticProfile& profile, const std::vector<double>& currents,
                                        const InterferometerConfig& config, const PhysicalConstants& c)
{
    std::set<double> distinct(currents.begin(), currents.end());
    if (distinct.size() < 3) {
        throw DomainError("modulation curve needs at least three distinct currents");
    }
    const Trajectory traj = make_trajectory(config, c);
    ModulationCurve curve;
    std::vector<double> xs, ys;
    for (double current : currents) {
        if (current < 0.0) {
            throw DomainError("solenoid currents must be non-negative");
        }
        const MagneticProfile p = profile.at_current(current);
        ModulationPoint pt;
        pt.current = current;
        pt.bias_field = profile.bias_scale() * current;
        pt.delta_g = zeeman_differential_bias(p, traj, config, c);
        curve.points.push_back(pt);
        xs.push_back(current);
        ys.push_back(pt.delta_g);
    }
    const auto coeffs = fit_quadratic(xs, ys);
    curve.c0 = coeffs[0];
    curve.c1 = coeffs[1];
    curve.c2 = coeffs[2];
    return curve;
}

namespace {

double diffraction_phase(const PulseWaveform& pulse, const InterferometerConfig& config, const PhysicalConstants& c)
{
    const auto out = propagate_pulse(MomentumLadderState::ground(config.ladder_half_width), pulse, config, c, 0.0);
    return std::arg(out.at(config.bragg_order)) - std::arg(out.at(0));
}

} // namespace

double diffraction_phase_sensitivity(const PulseWaveform& pulse, const InterferometerConfig& config,
                                     const PhysicalConstants& c)
{
    constexpr double h = 1e-3;
    PulseWaveform up = pulse;
    PulseWaveform down = pulse;
    up.peak_rabi *= 1.0 + h;
    down.peak_rabi *= 1.0 - h;
    const double d = std::remainder(diffraction_phase(up, config, c) - diffraction_phase(down, config, c), two_pi);
    return d / (2.0 * h);
}

SystematicShift ac_stark_bound(double intensity_gradient_fraction, double pulse_imbalance_fraction,
                               double peak_rabi, const InterferometerConfig& config, const PhysicalConstants& c)
{
    if (intensity_gradient_fraction < 0.0 || intensity_gradient_fraction > 1.0 || pulse_imbalance_fraction < 0.0
        || pulse_imbalance_fraction > 1.0) {
        throw DomainError("intensity fractions must lie in [0, 1]");
    }
    if (peak_rabi < 0.0) {
        throw DomainError("peak Rabi frequency must be non-negative");
    }
    SystematicShift out;
    out.channel = Channel::ac_stark;
    out.note = "upper bound";
    if (peak_rabi == 0.0 || (intensity_gradient_fraction == 0.0 && pulse_imbalance_fraction == 0.0)) {
        return out;
    }
    const double sigma = config.pulse_sigma();
    const double duration = sigma * std::sqrt(two_pi);
    // opposite shifts of the two states add in the differential
    const double gradient_phase = 2.0 * peak_rabi * intensity_gradient_fraction * duration;
    double imbalance_phase = 0.0;
    if (pulse_imbalance_fraction > 0.0) {
        const PulseWaveform half{sigma, 0.5 * peak_rabi, 4.0};
        imbalance_phase = std::abs(diffraction_phase_sensitivity(half, config, c)) * pulse_imbalance_fraction;
    }
    out.uncertainty = (gradient_phase + imbalance_phase) / config.scale_factor() / c.g_nominal;
    return out;
}

double rabi_mismatch(const LaserField& field, const PhysicalConstants& c)
{
    const double o1 = std::abs(two_photon_rabi(state_f1, field, c));
    const double o2 = std::abs(two_photon_rabi(state_f2, field, c));
    if (o1 == 0.0) {
        throw DomainError("F=1 Rabi frequency is zero");
    }
    return (o1 - o2) / o1;
}

SystematicShift two_photon_light_shift_bound(double freq_error, const LaserField& balanced_field,
                                             const PulseWaveform& half_pi, const InterferometerConfig& config,
                                             const PhysicalConstants& c)
{
    SystematicShift out;
    out.channel = Channel::two_photon_light_shift;
    out.note = "first-order bound";
    if (freq_error == 0.0) {
        return out;
    }
    LaserField shifted = balanced_field;
    shifted.detuning += freq_error;
    const double mismatch = rabi_mismatch(shifted, c) - rabi_mismatch(balanced_field, c);
    const double phase = diffraction_phase_sensitivity(half_pi, config, c) * mismatch;
    out.value = phase / config.scale_factor() / c.g_nominal;
    out.uncertainty = std::abs(out.value);
    return out;
}

double tide_g(double t, const TideModel& model)
{
    double g = model.site_offset;
    for (const auto& k : model.constituents) {
        g += k.amplitude * std::cos(k.omega * t + k.phase);
    }
    return g;
}

double tide_g_rate(double t, const TideModel& model)
{
    double r = 0.0;
    for (const auto& k : model.constituents) {
        r -= k.amplitude * k.omega * std::sin(k.omega * t + k.phase);
    }
    return r;
}

SystematicShift tide_alternation_bias(const TideModel& model, double lag, double window, double g_unit)
{
    model.validate();
    if (!(window > 0.0) || !(g_unit > 0.0)) {
        throw DomainError("window and g unit must be positive");
    }
    if (window < model.longest_period()) {
        throw DomainError("averaging window " + std::to_string(window) + " s is shorter than the longest tide period "
                          + std::to_string(model.longest_period()) + " s");
    }
    double mean = 0.0;
    for (const auto& k : model.constituents) {
        const double w = k.omega;
        // closed-form average of cos(w (t + lag) + p) - cos(w t + p) over [0, window]
        mean += k.amplitude / (w * window)
                * (std::sin(w * (window + lag) + k.phase) - std::sin(w * lag + k.phase) - std::sin(w * window + k.phase)
                   + std::sin(k.phase));
    }
    double largest = 0.0;
    constexpr double step = 10.0;
    const auto samples = static_cast<std::size_t>(std::ceil(window / step));
    for (std::size_t i = 0; i <= samples; ++i) {
        const double t = std::min(window, static_cast<double>(i) * step);
        largest = std::max(largest, std::abs(tide_g(t + lag, model) - tide_g(t, model)));
    }
    SystematicShift out;
    out.channel = Channel::tide;
    out.value = mean / g_unit;
    out.uncertainty = largest / g_unit;
    out.note = "mean over window; uncertainty holds the largest single difference";
    return out;
}

} // namespace uff
