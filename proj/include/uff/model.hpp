#pragma once

#include "uff/constants.hpp"

namespace uff {

/// Geometry and timing of the pi/2 - pi - pi/2 sequence.
struct InterferometerConfig {
    double pulse_separation = 0.150;   // T, s
    int bragg_order = 1;               // n
    double k_eff = 0.0;                // 1/m, 2k
    double chirp_alpha = 0.0;          // rad/s^2 (operating point; 0 = unset)
    double launch_velocity = 0.0;      // m/s
    double fountain_height = 0.66;     // m
    double momentum_width = 0.37;      // hbar k, e^-2 half-width of the vertical distribution
    double pi_pulse_fwhm = 42e-6;      // s, FWHM of the Rabi envelope
    double cycle_time = 1.0;           // s
    double alternation_lag = 2.0;      // s, F=1 point follows F=2 point by this much
    double contrast = 0.5;
    double offset = 0.5;
    int ladder_half_width = 5;         // M, orders -M..M kept in the Bragg ladder

    double pulse_sigma() const;
    /// Scale factor n k_eff T^2 (rad per m/s^2).
    double scale_factor() const { return bragg_order * k_eff * pulse_separation * pulse_separation; }
    /// Chirp-rate period of the fringe, 2 pi / (n T^2).
    double fringe_period() const;
    /// Throws DomainError if any invariant is broken.
    void validate() const;
};

/// Nominal configuration: T = 150 ms, n = 1, launch to a 0.66 m apex.
InterferometerConfig default_interferometer(const PhysicalConstants& c);

/// Unperturbed arm trajectories over [0, 2T], with t = 0 at the first pulse.
/// The upper arm receives the momentum kick at the first pulse.
class Trajectory {
public:
    Trajectory(double z_first_pulse, double v_first_pulse, double g, double pulse_separation,
               double recoil_velocity);

    double z_center(double t) const;
    double z_upper(double t) const;
    double z_lower(double t) const;
    double arm_separation(double t) const;
    double duration() const { return 2.0 * pulse_separation_; }
    double max_separation() const { return recoil_velocity_ * pulse_separation_; }
    double z_min() const;
    double z_max() const;
    double pulse_separation() const { return pulse_separation_; }

private:
    double z0_;
    double v0_;
    double g_;
    double pulse_separation_;
    double recoil_velocity_;
};

/// Fountain trajectory with the pi pulse at the apex.
Trajectory make_trajectory(const InterferometerConfig& config, const PhysicalConstants& c);

} // namespace uff
