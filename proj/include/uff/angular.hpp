#pragma once

// Angular-momentum coupling coefficients. Arguments are passed as twice the
// (possibly half-integer) quantum number so everything stays in integers.

namespace uff::angular {

double wigner_3j(int two_j1, int two_j2, int two_j3, int two_m1, int two_m2, int two_m3);

double wigner_6j(int two_j1, int two_j2, int two_j3, int two_j4, int two_j5, int two_j6);

/// |<F mF| e r_q |F' mF+q>|^2 for the 87Rb D2 line (I = 3/2, J = 1/2,
/// J' = 3/2) in units of |<J||er||J'>|^2. Zero for forbidden transitions.
double d2_relative_strength(int f, int m_f, int f_excited, int q);

} // namespace uff::angular
