#include "uff/angular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

namespace uff::angular {
namespace {

constexpr int max_factorial = 40;

const std::array<double, max_factorial + 1>& factorials()
{
    static const auto table = [] {
        std::array<double, max_factorial + 1> f{};
        f[0] = 1.0;
        for (int i = 1; i <= max_factorial; ++i) {
            f[i] = f[i - 1] * i;
        }
        return f;
    }();
    return table;
}

// n given doubled; must be an even, non-negative number.
double fact2(int two_n)
{
    return factorials()[static_cast<std::size_t>(two_n / 2)];
}

bool triangle_ok(int a, int b, int c)
{
    return c >= std::abs(a - b) && c <= a + b && (a + b + c) % 2 == 0;
}

// sqrt of the triangle coefficient Delta(abc), doubled arguments
double triangle_coeff(int a, int b, int c)
{
    return std::sqrt(fact2(a + b - c) * fact2(a - b + c) * fact2(-a + b + c) / fact2(a + b + c + 2));
}

} // namespace

double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3)
{
    if (m1 + m2 + m3 != 0 || !triangle_ok(j1, j2, j3)) {
        return 0.0;
    }
    if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) {
        return 0.0;
    }
    if ((j1 + m1) % 2 != 0 || (j2 + m2) % 2 != 0 || (j3 + m3) % 2 != 0) {
        return 0.0;
    }

    // Racah formula; k runs over integers (doubled here in steps of 2).
    const int k_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
    const int k_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
    double sum = 0.0;
    for (int k = k_min; k <= k_max; k += 2) {
        const double denom = fact2(k) * fact2(j3 - j2 + k + m1) * fact2(j3 - j1 + k - m2)
                             * fact2(j1 + j2 - j3 - k) * fact2(j1 - k - m1) * fact2(j2 - k + m2);
        sum += ((k / 2) % 2 == 0 ? 1.0 : -1.0) / denom;
    }
    const double pref = triangle_coeff(j1, j2, j3)
                        * std::sqrt(fact2(j1 + m1) * fact2(j1 - m1) * fact2(j2 + m2) * fact2(j2 - m2)
                                    * fact2(j3 + m3) * fact2(j3 - m3));
    const int phase = (j1 - j2 - m3) / 2;
    return (phase % 2 == 0 ? 1.0 : -1.0) * pref * sum;
}

double wigner_6j(int j1, int j2, int j3, int j4, int j5, int j6)
{
    if (!triangle_ok(j1, j2, j3) || !triangle_ok(j1, j5, j6) || !triangle_ok(j4, j2, j6)
        || !triangle_ok(j4, j5, j3)) {
        return 0.0;
    }
    const int a1 = j1 + j2 + j3;
    const int a2 = j1 + j5 + j6;
    const int a3 = j4 + j2 + j6;
    const int a4 = j4 + j5 + j3;
    const int b1 = j1 + j2 + j4 + j5;
    const int b2 = j2 + j3 + j5 + j6;
    const int b3 = j3 + j1 + j6 + j4;
    const int t_min = std::max({a1, a2, a3, a4});
    const int t_max = std::min({b1, b2, b3});
    double sum = 0.0;
    for (int t = t_min; t <= t_max; t += 2) {
        const double denom = fact2(t - a1) * fact2(t - a2) * fact2(t - a3) * fact2(t - a4)
                             * fact2(b1 - t) * fact2(b2 - t) * fact2(b3 - t);
        sum += ((t / 2) % 2 == 0 ? 1.0 : -1.0) * fact2(t + 2) / denom;
    }
    return triangle_coeff(j1, j2, j3) * triangle_coeff(j1, j5, j6) * triangle_coeff(j4, j2, j6)
           * triangle_coeff(j4, j5, j3) * sum;
}

double d2_relative_strength(int f, int m_f, int f_excited, int q)
{
    constexpr int two_i = 3;
    constexpr int two_j = 1;
    constexpr int two_jp = 3;
    const int m_excited = m_f + q;
    if (f_excited < 0 || std::abs(m_excited) > f_excited || std::abs(f_excited - f) > 1) {
        return 0.0;
    }
    const double six = wigner_6j(two_j, two_jp, 2, 2 * f_excited, 2 * f, two_i);
    const double three = wigner_3j(2 * f_excited, 2, 2 * f, 2 * m_excited, -2 * q, -2 * m_f);
    const double reduced_sq = (2 * f_excited + 1) * (two_j + 1) * six * six;
    return reduced_sq * (2 * f + 1) * three * three;
}

} // namespace uff::angular
