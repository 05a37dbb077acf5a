#pragma once

#include <array>
#include <numbers>

namespace uff {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Frozen 87Rb D2 data used by every module. All values SI unless the
/// field name says otherwise.
struct PhysicalConstants {
    double hbar;                   // J s
    double planck;                 // J s
    double speed_of_light;         // m/s
    double vacuum_permittivity;    // F/m
    double atom_mass;              // kg
    double wavelength;             // m, Bragg laser (D2 line)
    double wavenumber;             // 1/m
    double recoil_omega;           // rad/s, hbar k^2 / 2m
    double g_nominal;              // m/s^2
    double hyperfine_splitting;    // Hz, 5S1/2 F=1 <-> F=2
    // 5P3/2 hyperfine level offsets relative to F'=3, indexed by F' (Hz, <= 0).
    std::array<double, 4> excited_offsets;
    double d2_linewidth;           // Hz (Gamma / 2pi)
    double d2_reduced_dipole;      // C m, <J=1/2||er||J'=3/2>
    double clock_quadratic_coeff;  // Hz/T^2, clock-transition quadratic Zeeman

    /// Recoil velocity of a single 2 hbar k momentum transfer.
    double two_photon_recoil_velocity() const { return 2.0 * hbar * wavenumber / atom_mass; }
    double k_eff() const { return 2.0 * wavenumber; }
};

PhysicalConstants rb87_constants(double g_nominal = 9.794);

/// The two magnetically insensitive clock states used as test masses.
struct HyperfineState {
    int f_number;
    int m_f;
    int zeeman_sign;        // sign of the m_F = 0 quadratic Zeeman shift
    double spin_perp_sq;    // |F_perp|^2 = F(F+1) - m_F^2

    friend bool operator==(const HyperfineState&, const HyperfineState&) = default;
};

/// |F_perp|^2 for m_F = 0; throws DomainError for F outside {1, 2}.
double spin_perp_amplitude(int f_number);

/// Throws DomainError for F outside {1, 2}.
HyperfineState hyperfine_state(int f_number);

inline const HyperfineState state_f1{1, 0, -1, 2.0};
inline const HyperfineState state_f2{2, 0, +1, 6.0};

} // namespace uff
