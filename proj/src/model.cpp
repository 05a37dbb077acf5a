#include "uff/model.hpp"

#include "uff/errors.hpp"

#include <algorithm>
#include <cmath>

namespace uff {

double InterferometerConfig::pulse_sigma() const
{
    // Gaussian FWHM = 2 sqrt(2 ln 2) sigma
    return pi_pulse_fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

double InterferometerConfig::fringe_period() const
{
    return two_pi / (bragg_order * pulse_separation * pulse_separation);
}

void InterferometerConfig::validate() const
{
    if (!(pulse_separation > 0.0)) {
        throw DomainError("pulse separation T must be positive");
    }
    if (bragg_order < 1) {
        throw DomainError("Bragg order must be >= 1");
    }
    if (!(k_eff > 0.0)) {
        throw DomainError("k_eff must be positive");
    }
    if (!(momentum_width > 0.0)) {
        throw DomainError("momentum width must be positive");
    }
    if (!(pi_pulse_fwhm > 0.0)) {
        throw DomainError("pi pulse width must be positive");
    }
    if (!(cycle_time > 0.0) || alternation_lag < cycle_time) {
        throw DomainError("alternation lag must be >= cycle time > 0");
    }
    if (contrast < 0.0 || contrast > 1.0 || offset - contrast / 2 < 0.0 || offset + contrast / 2 > 1.0) {
        throw DomainError("fringe offset +- contrast/2 must stay within [0, 1]");
    }
    if (ladder_half_width < bragg_order + 3) {
        throw DomainError("ladder half-width must be >= n + 3");
    }
}

InterferometerConfig default_interferometer(const PhysicalConstants& c)
{
    InterferometerConfig cfg;
    cfg.k_eff = c.k_eff();
    cfg.launch_velocity = std::sqrt(2.0 * c.g_nominal * cfg.fountain_height);
    cfg.chirp_alpha = cfg.k_eff * c.g_nominal;
    return cfg;
}

Trajectory::Trajectory(double z_first_pulse, double v_first_pulse, double g, double pulse_separation,
                       double recoil_velocity)
    : z0_(z_first_pulse), v0_(v_first_pulse), g_(g), pulse_separation_(pulse_separation),
      recoil_velocity_(recoil_velocity)
{
}

double Trajectory::z_center(double t) const
{
    return z0_ + v0_ * t - 0.5 * g_ * t * t;
}

double Trajectory::z_upper(double t) const
{
    return z_center(t) + recoil_velocity_ * std::min(t, pulse_separation_);
}

double Trajectory::z_lower(double t) const
{
    return z_center(t) + recoil_velocity_ * std::max(0.0, t - pulse_separation_);
}

double Trajectory::arm_separation(double t) const
{
    return z_upper(t) - z_lower(t);
}

double Trajectory::z_min() const
{
    // lower arm is a parabola on each half; the minimum sits at an endpoint
    return std::min({z_lower(0.0), z_lower(pulse_separation_), z_lower(duration())});
}

double Trajectory::z_max() const
{
    double best = std::max({z_upper(0.0), z_upper(pulse_separation_), z_upper(duration())});
    // the upper arm's apex may fall inside either half
    const double t1 = (v0_ + recoil_velocity_) / g_;
    if (t1 > 0.0 && t1 < pulse_separation_) {
        best = std::max(best, z_upper(t1));
    }
    const double t2 = v0_ / g_;
    if (t2 > pulse_separation_ && t2 < duration()) {
        best = std::max(best, z_upper(t2));
    }
    return best;
}

Trajectory make_trajectory(const InterferometerConfig& config, const PhysicalConstants& c)
{
    const double g = c.g_nominal;
    const double v_launch = config.launch_velocity > 0.0 ? config.launch_velocity
                                                         : std::sqrt(2.0 * g * config.fountain_height);
    const double apex = v_launch * v_launch / (2.0 * g);
    const double T = config.pulse_separation;
    if (g * T > v_launch) {
        throw DomainError("launch velocity too small for a symmetric sequence about the apex");
    }
    const double recoil = config.bragg_order * c.two_photon_recoil_velocity();
    return Trajectory(apex - 0.5 * g * T * T, g * T, g, T, recoil);
}

} // namespace uff
