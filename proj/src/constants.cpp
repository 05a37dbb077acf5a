#include "uff/constants.hpp"

#include "uff/errors.hpp"

#include <string>

namespace uff {

PhysicalConstants rb87_constants(double g_nominal)
{
    if (!(g_nominal > 0.0)) {
        throw DomainError("g_nominal must be positive");
    }
    PhysicalConstants c{};
    c.hbar = 1.054571817e-34;
    c.planck = two_pi * c.hbar;
    c.speed_of_light = 299792458.0;
    c.vacuum_permittivity = 8.8541878128e-12;
    c.atom_mass = 1.44316060e-25;
    c.wavelength = 780.241209686e-9;
    c.wavenumber = two_pi / c.wavelength;
    c.recoil_omega = c.hbar * c.wavenumber * c.wavenumber / (2.0 * c.atom_mass);
    c.g_nominal = g_nominal;
    c.hyperfine_splitting = 6.834682610904e9;
    // F'=3 -> F'=2: 266.650 MHz, F'=2 -> F'=1: 156.947 MHz, F'=1 -> F'=0: 72.218 MHz
    const double f2 = -266.650e6;
    const double f1 = f2 - 156.947e6;
    const double f0 = f1 - 72.218e6;
    c.excited_offsets = {f0, f1, f2, 0.0};
    c.d2_linewidth = 6.0666e6;
    c.d2_reduced_dipole = 3.58424e-29;
    // 575.15 Hz/G^2, 1 G = 1e-4 T
    c.clock_quadratic_coeff = 575.15e8;
    return c;
}

double spin_perp_amplitude(int f_number)
{
    if (f_number != 1 && f_number != 2) {
        throw DomainError("hyperfine F must be 1 or 2, got " + std::to_string(f_number));
    }
    return static_cast<double>(f_number * (f_number + 1));
}

HyperfineState hyperfine_state(int f_number)
{
    const double perp = spin_perp_amplitude(f_number);
    return HyperfineState{f_number, 0, f_number == 1 ? -1 : +1, perp};
}

} // namespace uff
