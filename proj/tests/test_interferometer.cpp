#include "doctest.h"
#include "support.hpp"

#include "uff/campaign.hpp"
#include "uff/detection.hpp"
#include "uff/errors.hpp"
#include "uff/interferometer.hpp"

#include <cmath>

using namespace uff;
using doctest::Approx;

TEST_CASE("resonance offset")
{
    const auto& c = fixture::rb();
    CHECK(resonance_offset(0.0, 1, c) == Approx(two_pi * 15.08e3).epsilon(1e-3));
    CHECK(resonance_offset(0.0, 2, c) == 2.0 * resonance_offset(0.0, 1, c));
    CHECK(resonance_offset(9.8, 1, c) == Approx(2.0 * c.wavenumber * 9.8 + 4.0 * c.recoil_omega).epsilon(1e-15));
}

TEST_CASE("closed-form interferometer phase")
{
    const auto& cfg = fixture::config();
    CHECK(mz_phase(9.8, cfg.k_eff * 9.8, cfg) == 0.0);

    const double k_eff = 2.0 * 2.0 * 3.14159265358979323846 / 780.241209686e-9;
    CHECK(mz_phase(9.8, 0.0, cfg) == Approx(k_eff * 9.8 * 0.15 * 0.15).epsilon(1e-14));
    CHECK(mz_phase(9.8, 0.0, cfg) == Approx(3.55e6).epsilon(0.01));
    CHECK(cfg.fringe_period() == Approx(279.3).epsilon(1e-3));

    // one fringe period in chirp advances the phase by exactly 2 pi
    const double period = cfg.fringe_period();
    CHECK(mz_phase(0.0, 0.0, cfg) - mz_phase(0.0, period, cfg) == Approx(two_pi).epsilon(1e-14));
}

TEST_CASE("phase is linear in g and alpha")
{
    const auto& cfg = fixture::config();
    const double h_g = 1e-3;
    const double dphi_dg = (mz_phase(9.8 + h_g, 1.5e8, cfg) - mz_phase(9.8 - h_g, 1.5e8, cfg)) / (2.0 * h_g);
    CHECK(dphi_dg == Approx(cfg.scale_factor()).epsilon(1e-9));
    CHECK(cfg.scale_factor() == Approx(3.62e5).epsilon(0.01));

    const double h_a = 1.0;
    const double dphi_da = (mz_phase(9.8, 1.5e8 + h_a, cfg) - mz_phase(9.8, 1.5e8 - h_a, cfg)) / (2.0 * h_a);
    CHECK(cfg.k_eff * dphi_da == Approx(-cfg.bragg_order * cfg.k_eff * cfg.pulse_separation * cfg.pulse_separation)
                                     .epsilon(1e-9));
}

TEST_CASE("transition probability")
{
    CHECK(transition_probability(0.0, 1.0, 0.5) == 0.0);
    CHECK(transition_probability(pi, 1.0, 0.5) == 1.0);
    CHECK(transition_probability(pi / 2.0, 0.4, 0.5) == Approx(0.5).epsilon(1e-15));
    for (double phi : {-2.0, 0.1, 1.3, 3.0, 7.7}) {
        CHECK(transition_probability(phi + two_pi, 0.5, 0.5) == Approx(transition_probability(phi, 0.5, 0.5))
                                                                    .epsilon(1e-12));
    }
}

TEST_CASE("mid-fringe operating point")
{
    const auto& cfg = fixture::config();
    const double g = 9.794123;
    const double alpha = mid_fringe_chirp(g, cfg);
    CHECK(mz_phase(g, alpha, cfg) == Approx(pi / 2.0).epsilon(1e-7));
    CHECK(mid_fringe_gravity(cfg.offset, alpha, cfg) == Approx(g).epsilon(1e-14));
    // the inversion is exact anywhere on the [0, pi] branch
    for (double dg : {-2e-6, -5e-7, 1e-9, 3e-6}) {
        const double p = transition_probability(mz_phase(g + dg, alpha, cfg), cfg.contrast, cfg.offset);
        CHECK(std::abs(mid_fringe_gravity(p, alpha, cfg) - (g + dg)) < 1e-11);
    }
    auto flat = cfg;
    flat.contrast = 0.0;
    CHECK_THROWS_AS(mid_fringe_gravity(0.5, alpha, flat), DomainError);
}

TEST_CASE("noiseless shot at a closed fringe")
{
    const auto& c = fixture::rb();
    auto cfg = fixture::config();
    cfg.contrast = 1.0;
    cfg.offset = 0.5;
    ShotEnvironment env;
    RngStream rng(1, 0, 2);
    const auto rec = simulate_shot(state_f2, cfg.k_eff * c.g_nominal, 12.0, cfg, NoiseModel::none(), env, rng, c);
    CHECK(std::abs(rec.probability) < 1e-12);
    CHECK(rec.timestamp == 12.0);
    CHECK(rec.state_f == 2);
}

TEST_CASE("states differ only through the environment")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    ShotEnvironment env;
    const double alpha = mid_fringe_chirp(c.g_nominal, cfg) + 17.0;
    RngStream r1(5, 0, 1);
    RngStream r2(5, 0, 2);
    const auto p1 = simulate_shot(state_f1, alpha, 0.0, cfg, NoiseModel::none(), env, r1, c);
    const auto p2 = simulate_shot(state_f2, alpha, 0.0, cfg, NoiseModel::none(), env, r2, c);
    CHECK(p1.probability == p2.probability);
}

TEST_CASE("environment: violation and Zeeman biases")
{
    const auto& c = fixture::rb();
    ShotEnvironment env;
    env.k_tilde = 1e-8;
    env.zeeman_bias_f1 = 3e-10;
    env.zeeman_bias_f2 = -1e-10;
    CHECK(env.gravity(state_f1, 0.0, c) == Approx(c.g_nominal * (1.0 + 2e-8 + 3e-10)).epsilon(1e-15));
    CHECK(env.gravity(state_f2, 0.0, c) == Approx(c.g_nominal * (1.0 + 6e-8 - 1e-10)).epsilon(1e-15));
}

TEST_CASE("noise calibration")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    const auto noise = calibrate_noise(1.2e-7, 0.01, 0.2, cfg, c);
    // per pair 1.2e-7 / sqrt(4 s); per point sqrt(2) smaller; minus detection
    const double per_point = 1.2e-7 / 2.0 * c.g_nominal * cfg.scale_factor() / std::sqrt(2.0);
    const double detection = 0.01 / (0.5 * cfg.contrast);
    CHECK(noise.per_shot_phase_sigma == Approx(std::sqrt(per_point * per_point - detection * detection)).epsilon(1e-12));
    CHECK(noise.vibration_common == 0.2);
    CHECK_THROWS_AS(calibrate_noise(1.2e-7, 1.0, 0.0, cfg, c), CalibrationError);
    CHECK_THROWS_AS(calibrate_noise(-1.0, 0.0, 0.0, cfg, c), DomainError);
    CHECK(pair_period(cfg) == 4.0);
}

TEST_CASE("calibrated noise gives the target differential scatter")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    CampaignSettings s;
    s.duration = 4000.0 * 4.0;
    s.seed = 7;
    s.noise = calibrate_noise(1.2e-7, 0.01, 0.2, cfg, c);
    s.tides = false;
    s.zeeman = false;
    const auto records = run_campaign(s, cfg, c);
    const auto result = differential_analysis(records, 400.0, cfg, c);
    const auto& d = result.pair_delta_g;
    REQUIRE(d.size() == 4000);
    double mean = 0.0;
    for (double x : d) {
        mean += x;
    }
    mean /= static_cast<double>(d.size());
    double var = 0.0;
    for (double x : d) {
        var += (x - mean) * (x - mean);
    }
    const double sd = std::sqrt(var / static_cast<double>(d.size() - 1));
    // 1.2e-7 g / sqrt(Hz) at one pair per 4 s
    CHECK(sd == Approx(1.2e-7 / 2.0).epsilon(0.05));

    // with systematics off the mean of 1000 pairs is consistent with zero
    double mean_1000 = 0.0;
    for (std::size_t i = 0; i < 1000; ++i) {
        mean_1000 += d[i];
    }
    mean_1000 /= 1000.0;
    CHECK(std::abs(mean_1000) < sd / std::sqrt(1000.0));
}

TEST_CASE("fringe scan geometry")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    ShotEnvironment env;
    const double center = mid_fringe_chirp(c.g_nominal, cfg);
    const auto f2 = fringe_scan(state_f2, center, cfg, 20, 2, NoiseModel::none(), env, 1, c);
    const auto f1 = fringe_scan(state_f1, center, cfg, 20, 2, NoiseModel::none(), env, 1, c);
    REQUIRE(f2.size() == 40);
    REQUIRE(f1.size() == 40);
    const double period = cfg.fringe_period();
    const double step = f2[1].alpha - f2[0].alpha;
    CHECK(step == Approx(period / 20.0).epsilon(1e-9));
    // 4 pi of phase: the scan spans two periods at one point per step
    CHECK(f2.back().alpha - f2.front().alpha + step == Approx(2.0 * period).epsilon(1e-9));
    CHECK(f1.front().timestamp - f2.front().timestamp == cfg.alternation_lag);
    // each point occupies two 1 s cycles
    CHECK(f1.back().timestamp + 2.0 * cfg.cycle_time - f2.front().timestamp == 160.0);
    CHECK_THROWS_AS(fringe_scan(state_f2, center, cfg, 0, 2, NoiseModel::none(), env, 1, c), DomainError);
}

TEST_CASE("noiseless fringe is an exact cosine")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    ShotEnvironment env;
    const double center = mid_fringe_chirp(c.g_nominal, cfg);
    for (const auto& state : {state_f1, state_f2}) {
        const auto points = fringe_scan(state, center, cfg, 20, 2, NoiseModel::none(), env, 1, c);
        const auto fit = sine_fringe_fit(points, cfg);
        CHECK(fit.residual_rms < 1e-12);
        CHECK(fit.contrast == Approx(cfg.contrast).epsilon(1e-9));
        CHECK(fit.gravity(cfg, c.g_nominal) == Approx(c.g_nominal).epsilon(1e-13));
    }
}

TEST_CASE("noisy fringes have similar contrast")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    const auto noise = calibrate_noise(1.2e-7, 0.01, 0.2, cfg, c);
    ShotEnvironment env;
    const double center = mid_fringe_chirp(c.g_nominal, cfg);
    const auto fit1 = sine_fringe_fit(fringe_scan(state_f1, center, cfg, 20, 2, noise, env, 3, c), cfg);
    const auto fit2 = sine_fringe_fit(fringe_scan(state_f2, center, cfg, 20, 2, noise, env, 3, c), cfg);
    CHECK(std::abs(fit1.contrast - fit2.contrast) < 3.0 * std::hypot(fit1.contrast_sigma(), fit2.contrast_sigma()));
}

TEST_CASE("wrap_phase")
{
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(pi) == Approx(pi));
    CHECK(wrap_phase(-pi) == Approx(pi));
    CHECK(wrap_phase(3.0 * two_pi + 0.25) == Approx(0.25).epsilon(1e-12));
    CHECK(wrap_phase(-0.25 - 5.0 * two_pi) == Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("ladder propagation reproduces the closed-form phase")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    const auto& p = fixture::pulses();
    for (double phase : {0.4, -2.0}) {
        const auto check = ladder_phase_cross_check(c.g_nominal, phase, p.pi_pulse, p.half_pi, cfg, c);
        CAPTURE(phase);
        CHECK(std::abs(check.difference) < 1e-3);
        CHECK(check.ladder_contrast > 0.9);
    }
}
