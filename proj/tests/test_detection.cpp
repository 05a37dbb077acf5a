#include "doctest.h"
#include "support.hpp"

#include "uff/detection.hpp"
#include "uff/errors.hpp"
#include "uff/interferometer.hpp"
#include "uff/rng.hpp"

#include <cmath>

using namespace uff;
using doctest::Approx;

namespace {

std::vector<FringePoint> synthetic_fringe(double offset, double contrast, double phase, double alpha_ref,
                                          const InterferometerConfig& cfg, int count = 40)
{
    const double nt2 = cfg.bragg_order * cfg.pulse_separation * cfg.pulse_separation;
    std::vector<FringePoint> out;
    for (int i = 0; i < count; ++i) {
        const double alpha = alpha_ref + cfg.fringe_period() * (i / 20.0 - 1.0);
        const double p = offset - 0.5 * contrast * std::cos(phase - nt2 * (alpha - alpha_ref));
        out.push_back({alpha, p, 2, 4.0 * i});
    }
    return out;
}

// direct overlapping Allan deviation from the definition
double brute_force_adev(const std::vector<double>& y, std::size_t m)
{
    const std::size_t n = y.size();
    double sum = 0.0;
    std::size_t terms = 0;
    for (std::size_t j = 0; j + 2 * m <= n; ++j) {
        double a = 0.0, b = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            a += y[j + k];
            b += y[j + m + k];
        }
        const double d = (b - a) / static_cast<double>(m);
        sum += d * d;
        ++terms;
    }
    return std::sqrt(sum / (2.0 * static_cast<double>(terms)));
}

} // namespace

TEST_CASE("Raman peak separation")
{
    const auto& c = fixture::rb();
    const double sep = raman_peak_separation(c);
    CHECK(sep == Approx(8.0 * c.recoil_omega).epsilon(1e-12));
    CHECK(sep / two_pi == Approx(30e3).epsilon(0.02));
}

TEST_CASE("simulated Raman spectrum")
{
    const auto& c = fixture::rb();
    const double lw = two_pi * 300.0;
    const auto s = simulate_raman_spectrum(0.4, 0.4, c, lw);
    CHECK(s.response_at(0.0) == Approx(s.response_at(s.peak_separation)).epsilon(1e-12));
    CHECK(s.responses.size() == 2001);
    CHECK(s.frequency_offsets.front() < 0.0);
    CHECK(s.frequency_offsets.back() > s.peak_separation);
    // resolved: the valley is far below the peaks
    CHECK(s.response_at(0.5 * s.peak_separation) < 0.1 * s.response_at(0.0));
    CHECK_THROWS_AS(simulate_raman_spectrum(0.7, 0.7, c, lw), DomainError);
    CHECK_THROWS_AS(simulate_raman_spectrum(0.5, 0.5, c, 0.0), DomainError);
}

TEST_CASE("population from two peak samples")
{
    CHECK(population_from_two_samples(0.3, 0.3) == 0.5);
    CHECK(population_from_two_samples(0.7, 0.0) == 0.0);
    CHECK_THROWS_AS(population_from_two_samples(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(population_from_two_samples(-0.1, 0.2), DomainError);
}

TEST_CASE("spectrum then two-sample readout is the identity")
{
    const auto& c = fixture::rb();
    for (int i = 1; i <= 9; ++i) {
        const double p = 0.1 * i;
        const auto s = simulate_raman_spectrum(1.0 - p, p, c, two_pi * 300.0);
        CHECK(population_from_two_samples(s.response_at(0.0), s.response_at(s.peak_separation))
              == Approx(p).epsilon(1e-9));
    }
}

TEST_CASE("noisy readout recovers the population within detection noise")
{
    const auto& c = fixture::rb();
    const double sigma = 0.01;
    RngStream rng(42, 0);
    for (int i = 1; i <= 9; ++i) {
        const double p = 0.1 * i;
        const auto s = simulate_raman_spectrum(1.0 - p, p, c, two_pi * 300.0);
        const double r1 = s.response_at(0.0) + rng.normal(sigma);
        const double r2 = s.response_at(s.peak_separation) + rng.normal(sigma);
        CHECK(std::abs(population_from_two_samples(r1, r2) - p) < 5.0 * sigma);
    }
}

TEST_CASE("noiseless fringe fit recovers the generating parameters")
{
    const auto& cfg = fixture::config();
    struct Gen {
        double offset, contrast, phase;
    };
    for (const Gen& g : {Gen{0.5, 0.5, 0.7}, Gen{0.45, 0.3, -2.3}, Gen{0.6, 0.8, 3.0}, Gen{0.5, 0.02, 1.1}}) {
        const auto fit = sine_fringe_fit(synthetic_fringe(g.offset, g.contrast, g.phase, 0.0, cfg), cfg, 0.0);
        CHECK(std::abs(fit.offset / g.offset - 1.0) < 1e-10);
        CHECK(std::abs(fit.contrast / g.contrast - 1.0) < 1e-10);
        CHECK(std::abs(fit.phase / g.phase - 1.0) < 1e-10);
        CHECK(fit.residual_rms < 1e-12);
        CHECK(fit.points == 40);
    }
}

TEST_CASE("fit residual is invariant under a global phase shift")
{
    const auto& cfg = fixture::config();
    RngStream rng(9, 0);
    auto base = synthetic_fringe(0.5, 0.5, 0.2, 0.0, cfg);
    auto shifted = synthetic_fringe(0.5, 0.5, 0.2 + 4.0 * pi + 1.0, 0.0, cfg);
    std::vector<double> noise;
    for (std::size_t i = 0; i < base.size(); ++i) {
        noise.push_back(rng.normal(0.01));
        base[i].probability += noise.back();
    }
    // same noise on a fringe shifted by a whole number of turns plus 1 rad
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        shifted[i].probability += noise[i];
    }
    const auto a = sine_fringe_fit(base, cfg, 0.0);
    const auto b = sine_fringe_fit(shifted, cfg, 0.0);
    CHECK(b.residual_rms == Approx(a.residual_rms).epsilon(0.3));
    CHECK(wrap_phase(b.phase - a.phase) == Approx(1.0).epsilon(0.05));
    CHECK(b.phase > -pi);
    CHECK(b.phase <= pi);
}

TEST_CASE("fringe fit failure modes")
{
    const auto& cfg = fixture::config();
    CHECK_THROWS_AS(sine_fringe_fit(synthetic_fringe(0.5, 0.0, 0.3, 0.0, cfg), cfg, 0.0), UnconstrainedPhaseError);
    CHECK_THROWS_AS(sine_fringe_fit(synthetic_fringe(0.5, 0.5, 0.3, 0.0, cfg, 4), cfg, 0.0), FitError);
    // all points at one chirp cannot separate the quadratures
    std::vector<FringePoint> same(10, FringePoint{1.0, 0.3, 2, 0.0});
    CHECK_THROWS_AS(sine_fringe_fit(same, cfg), FitError);
}

TEST_CASE("fitted phase scatter matches the propagated covariance")
{
    const auto& cfg = fixture::config();
    const double sigma = 0.02;
    const int trials = 500;
    double sum = 0.0, sum_sq = 0.0, predicted = 0.0;
    for (int k = 0; k < trials; ++k) {
        RngStream rng(2024, static_cast<std::uint64_t>(k));
        auto points = synthetic_fringe(0.5, 0.5, 0.4, 0.0, cfg);
        for (auto& p : points) {
            p.probability += rng.normal(sigma);
        }
        const auto fit = sine_fringe_fit(points, cfg, 0.0);
        sum += fit.phase;
        sum_sq += fit.phase * fit.phase;
        predicted += fit.phase_sigma();
    }
    const double mean = sum / trials;
    const double sd = std::sqrt((sum_sq - trials * mean * mean) / (trials - 1));
    CHECK(sd == Approx(predicted / trials).epsilon(0.10));
    CHECK(mean == Approx(0.4).epsilon(0.02));
}

TEST_CASE("fringe gravity picks the branch nearest the guess")
{
    const auto& cfg = fixture::config();
    const double g = 9.7941;
    const double ref = mid_fringe_chirp(g, cfg);
    const auto fit = sine_fringe_fit(synthetic_fringe(0.5, 0.5, pi / 2.0, ref, cfg), cfg, ref);
    const double branch = two_pi / cfg.scale_factor();
    CHECK(fit.gravity(cfg, g) == Approx(g).epsilon(1e-14));
    CHECK(fit.gravity(cfg, g + 1.1 * branch) == Approx(g + branch).epsilon(1e-14));
}

TEST_CASE("Allan deviation of a constant series is zero")
{
    const std::vector<double> flat(1000, 3.7e-9);
    const auto a = allan_deviation(flat, 4.0, octave_taus(flat.size(), 4.0));
    REQUIRE(!a.deviations.empty());
    for (double d : a.deviations) {
        CHECK(d == 0.0);
    }
}

TEST_CASE("Allan deviation agrees with the direct definition")
{
    RngStream rng(5, 1);
    std::vector<double> y;
    for (int i = 0; i < 60; ++i) {
        y.push_back(rng.normal() + 0.01 * i);
    }
    const auto a = allan_deviation(y, 1.0, {1.0, 2.0, 3.0, 7.0, 15.0, 30.0});
    REQUIRE(a.taus.size() == 6);
    for (std::size_t i = 0; i < a.taus.size(); ++i) {
        CHECK(a.deviations[i] == Approx(brute_force_adev(y, a.cluster_sizes[i])).epsilon(1e-12));
    }
}

TEST_CASE("white noise follows tau^-1/2")
{
    const double s = 2.0;
    RngStream rng(77, 0);
    std::vector<double> y(1 << 17);
    for (auto& v : y) {
        v = rng.normal(s);
    }
    const auto a = allan_deviation(y, 1.0, octave_taus(y.size(), 1.0));
    for (std::size_t i = 0; i < a.taus.size(); ++i) {
        if (10 * a.cluster_sizes[i] > y.size()) {
            continue;
        }
        CAPTURE(a.taus[i]);
        CHECK(a.deviations[i] == Approx(s / std::sqrt(a.taus[i])).epsilon(0.05));
    }
    CHECK(a.slope_fit == Approx(s).epsilon(0.05));
    CHECK(a.fitted_exponent == Approx(-0.5).epsilon(0.05));
}

TEST_CASE("linear drift grows proportionally to tau")
{
    std::vector<double> y;
    for (int i = 0; i < 4096; ++i) {
        y.push_back(1e-3 * i);
    }
    const auto a = allan_deviation(y, 1.0, {1.0, 2.0, 4.0, 64.0});
    CHECK(a.deviations[1] == Approx(2.0 * a.deviations[0]).epsilon(1e-9));
    CHECK(a.deviations[3] == Approx(64.0 * a.deviations[0]).epsilon(1e-9));
    CHECK(a.deviations[0] == Approx(1e-3 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("taus beyond half the record are omitted with a notice")
{
    const std::vector<double> y(100, 1.0);
    const auto a = allan_deviation(y, 4.0, {4.0, 200.0, 20000.0});
    CHECK(a.taus.size() == 2);
    CHECK(a.taus.back() == 200.0);
    REQUIRE(a.notices.size() >= 1);
    CHECK(a.notices.front().find("20000") != std::string::npos);
    CHECK_THROWS_AS(allan_deviation(y, 0.0, {1.0}), DomainError);
    CHECK(allan_deviation({1.0}, 1.0, {1.0}).taus.empty());
}

TEST_CASE("octave taus")
{
    const auto t = octave_taus(20, 4.0, {20.0});
    const std::vector<double> expected{4.0, 8.0, 16.0, 20.0, 32.0};
    CHECK(t == expected);
}

TEST_CASE("weighted mean")
{
    const auto eq = weighted_mean({1.0, 2.0, 3.0, 6.0}, {0.5, 0.5, 0.5, 0.5});
    CHECK(eq.value == Approx(3.0).epsilon(1e-15));
    CHECK(eq.uncertainty == Approx(0.5 / 2.0).epsilon(1e-15));

    const auto dominated = weighted_mean({1.0, 5.0, -3.0}, {1.0, 1e-6, 1.0});
    CHECK(dominated.value == Approx(5.0).epsilon(1e-10));

    const auto w = weighted_mean({1.0, 4.0}, {1.0, 2.0});
    // weights 1 and 1/4
    CHECK(w.value == Approx((1.0 + 1.0) / 1.25).epsilon(1e-15));
    CHECK(w.uncertainty == Approx(1.0 / std::sqrt(1.25)).epsilon(1e-15));

    CHECK_THROWS_AS(weighted_mean({}, {}), DomainError);
    CHECK_THROWS_AS(weighted_mean({1.0}, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(weighted_mean({1.0}, {0.0}), DomainError);
}
