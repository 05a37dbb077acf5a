#include "doctest.h"
#include "support.hpp"

#include "uff/campaign.hpp"
#include "uff/errors.hpp"
#include "uff/pipeline.hpp"

#include <cmath>
#include <map>

using namespace uff;
using doctest::Approx;

namespace {

CampaignSettings quiet_settings(double duration)
{
    CampaignSettings s;
    s.duration = duration;
    s.noise = NoiseModel::none();
    s.tides = false;
    s.zeeman = false;
    return s;
}

RunConfig fast_run(double hours, std::uint64_t seed)
{
    RunConfig run;
    run.hours = hours;
    run.seed = seed;
    run.systematics_enabled = false;
    return run;
}

SystematicShift row(Channel ch, double value, double unc)
{
    SystematicShift s;
    s.channel = ch;
    s.value = value;
    s.uncertainty = unc;
    return s;
}

} // namespace

TEST_CASE("shot schedule counts")
{
    const auto& cfg = fixture::config();
    const auto plan = schedule_shots(63.0 * 3600.0, cfg);
    CHECK(plan.pair_count == 56700);
    CHECK(plan.point_count() == 113400);
    CHECK(plan.shots.size() == 4 * 56700);
    CHECK(plan.pair_period == 4.0);

    const auto fringe = schedule_shots(160.0, cfg);
    CHECK(fringe.pair_count == 40);
    CHECK(fringe.shots.back().timestamp + cfg.cycle_time == 160.0);
}

TEST_CASE("shot schedule layout")
{
    const auto& cfg = fixture::config();
    const auto plan = schedule_shots(16.0, cfg);
    REQUIRE(plan.shots.size() == 16);
    const int states[] = {2, 2, 1, 1};
    for (std::size_t i = 0; i < plan.shots.size(); ++i) {
        CHECK(plan.shots[i].timestamp == static_cast<double>(i));
        CHECK(plan.shots[i].state_f == states[i % 4]);
        CHECK(plan.shots[i].role == (i % 2 == 0 ? PeakRole::peak1 : PeakRole::peak2));
        CHECK(plan.shots[i].pair_index == i / 4);
        CHECK(plan.shots[i].point_index == i / 2);
    }
    const auto again = schedule_shots(16.0, cfg);
    for (std::size_t i = 0; i < plan.shots.size(); ++i) {
        CHECK(again.shots[i].timestamp == plan.shots[i].timestamp);
    }
    CHECK_THROWS_AS(schedule_shots(3.0, cfg), DomainError);
    auto tight = cfg;
    tight.alternation_lag = 1.0;
    CHECK_THROWS_AS(schedule_shots(100.0, tight), DomainError);
}

TEST_CASE("null campaign gives zero in every bin")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    const auto records = run_campaign(quiet_settings(63.0 * 3600.0), cfg, c);
    CHECK(records.size() == 113400);
    const auto result = differential_analysis(records, 400.0, cfg, c);
    CHECK(result.bins.size() == 567);
    for (const auto& b : result.bins) {
        CHECK(b.delta_g == 0.0);
    }
    CHECK(result.delta_g_stat.value == 0.0);
    CHECK(result.delta_g_stat.uncertainty == 0.0);
    CHECK(result.mean_g == Approx(c.g_nominal).epsilon(1e-12));
}

TEST_CASE("common tide cancels apart from the lag")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    auto s = quiet_settings(6.0 * 3600.0);
    s.tides = true;
    s.tide_model = default_tide_model();
    const auto records = run_campaign(s, cfg, c);
    const auto result = differential_analysis(records, 400.0, cfg, c);

    // expected per-bin difference: the tide change over one lag
    std::map<long long, std::pair<double, int>> lag_change;
    for (double t : result.pair_times) {
        auto& acc = lag_change[static_cast<long long>(std::floor(t / 400.0))];
        acc.first += (tide_g(t + cfg.alternation_lag, s.tide_model) - tide_g(t, s.tide_model)) / c.g_nominal;
        ++acc.second;
    }
    for (const auto& b : result.bins) {
        const auto& acc = lag_change.at(static_cast<long long>(std::floor(b.time / 400.0)));
        CHECK(std::abs(b.delta_g - acc.first / acc.second) < 1e-12);
    }
    // the per-state values follow the tide itself
    const auto& mid = result.bins[result.bins.size() / 2];
    CHECK(std::abs(mid.g_f2 - (c.g_nominal + tide_g(mid.time, s.tide_model))) < 5e-9 * c.g_nominal);
}

TEST_CASE("campaign determinism")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    CampaignSettings s;
    s.duration = 1800.0;
    s.seed = 99;
    s.noise = calibrate_noise(1.2e-7, 0.01, 0.2, cfg, c);
    s.tide_model = default_tide_model();
    const auto a = run_campaign(s, cfg, c);
    const auto b = run_campaign(s, cfg, c);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].probability == b[i].probability);
        CHECK(a[i].alpha == b[i].alpha);
    }
    s.seed = 100;
    const auto other = run_campaign(s, cfg, c);
    CHECK(other[0].probability != a[0].probability);
}

TEST_CASE("analysis input errors")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    CHECK_THROWS_AS(differential_analysis({}, 400.0, cfg, c), DomainError);
    const auto records = run_campaign(quiet_settings(200.0), cfg, c);
    CHECK_THROWS_AS(differential_analysis(records, 400.0, cfg, c), DomainError);
    CHECK_THROWS_AS(differential_analysis(records, 0.0, cfg, c), DomainError);
    auto bad = records;
    bad[0].state_f = 3;
    CHECK_THROWS_AS(differential_analysis(bad, 40.0, cfg, c), DomainError);
}

TEST_CASE("bins missing a state are dropped with a notice")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    auto records = run_campaign(quiet_settings(1600.0), cfg, c);
    // remove every F=1 point of the first bin
    std::erase_if(records, [](const ShotRecord& r) { return r.state_f == 1 && r.timestamp < 400.0; });
    const auto result = differential_analysis(records, 400.0, cfg, c);
    CHECK(result.bins.size() == 3);
    REQUIRE(!result.notices.empty());
    CHECK(result.notices.front().find("single state") != std::string::npos);
}

TEST_CASE("re-binning leaves the weighted mean consistent")
{
    const auto& c = fixture::rb();
    const auto& cfg = fixture::config();
    CampaignSettings s;
    s.duration = 10.0 * 3600.0;
    s.seed = 4;
    s.noise = calibrate_noise(1.2e-7, 0.01, 0.2, cfg, c);
    s.tides = false;
    s.zeeman = false;
    const auto records = run_campaign(s, cfg, c);
    const auto a = differential_analysis(records, 200.0, cfg, c);
    const auto b = differential_analysis(records, 400.0, cfg, c);
    // same pairs, so the two means differ only through the per-bin weights
    CHECK(a.pair_delta_g == b.pair_delta_g);
    const double predicted = std::sqrt(std::abs(a.delta_g_stat.uncertainty * a.delta_g_stat.uncertainty
                                                - b.delta_g_stat.uncertainty * b.delta_g_stat.uncertainty));
    CHECK(std::abs(a.delta_g_stat.value - b.delta_g_stat.value)
          <= std::max(predicted, 0.1 * b.delta_g_stat.uncertainty));
    CHECK(a.bins.size() == 2 * b.bins.size());
}

TEST_CASE("Eotvos ratio and derived quantities")
{
    CHECK(eotvos_ratio(9.8, 9.8) == 0.0);
    CHECK(eotvos_ratio(9.8 + 1e-9, 9.8) == -eotvos_ratio(9.8, 9.8 + 1e-9));
    CHECK(eotvos_ratio(3.0, 1.0) == 1.0);
    CHECK_THROWS_AS(eotvos_ratio(-1.0, 1.0), DomainError);

    CHECK(k_tilde_bound({0.0, 0.0}).value == 0.0);
    const auto k = k_tilde_bound({0.9e-10, 2.7e-10});
    CHECK(k.value == Approx(-0.225e-10).epsilon(1e-14));
    CHECK(std::round(k.value * 1e11) / 10.0 == -0.2);
    CHECK(k.uncertainty == Approx(0.675e-10).epsilon(1e-14));
    CHECK(std::round(k.uncertainty * 1e11) / 10.0 == 0.7);

    const Measured eta{0.9e-10, 2.7e-10};
    CHECK(r_diff(eta).value == eta.value);
    CHECK(r_diff(eta).uncertainty == eta.uncertainty);
    CHECK(r_diff({0.0, 0.0}).value == 0.0);
}

TEST_CASE("budget assembly")
{
    const auto budget = assemble_budget(row(Channel::statistical, -1.2e-10, 2.6e-10),
                                        row(Channel::quadratic_zeeman, -2.1e-10, 0.5e-10),
                                        row(Channel::ac_stark, 0.0, 0.2e-10), row(Channel::tide, 0.0, 0.03e-10));
    CHECK(budget.corrected_value == Approx(0.9e-10).epsilon(1e-12));
    const double rss = std::sqrt(2.6 * 2.6 + 0.5 * 0.5 + 0.2 * 0.2 + 0.03 * 0.03) * 1e-10;
    CHECK(budget.corrected_uncertainty == Approx(rss).epsilon(1e-12));
    CHECK(budget.corrected_uncertainty == Approx(2.66e-10).epsilon(1e-3));
    CHECK(std::round(budget.corrected_uncertainty * 1e11) / 10.0 == 2.7);
    CHECK(budget.rows.size() == 4);

    const auto zero = assemble_budget(row(Channel::statistical, 0, 0), row(Channel::quadratic_zeeman, 0, 0),
                                      row(Channel::ac_stark, 0, 0), row(Channel::tide, 0, 0));
    CHECK(zero.corrected_value == 0.0);
    CHECK(zero.corrected_uncertainty == 0.0);
}

TEST_CASE("k_tilde is exactly -eta/4 through the analysis chain")
{
    const auto report = run_campaign_pipeline(fast_run(1.0, 3));
    const auto& r = report.result;
    CHECK(r.k_tilde.value == -r.eta.value / 4.0);
    CHECK(r.k_tilde.uncertainty == r.eta.uncertainty / 4.0);
    CHECK(r.r_diff.value == r.eta.value);
}

TEST_CASE("injected violation is recovered")
{
    for (double k0 : {1e-9, 1e-8}) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            auto run = fast_run(10.0, seed);
            run.k_tilde = k0;
            const auto report = run_campaign_pipeline(run);
            const auto& k = report.result.k_tilde;
            CAPTURE(k0);
            CAPTURE(seed);
            CHECK(std::abs(k.value - k0) < 3.0 * k.uncertainty);
            CHECK(k.uncertainty < 0.1 * k0 + 2e-10);
        }
    }
}

TEST_CASE("Zeeman correction removes an injected bias")
{
    RunConfig run;
    run.hours = 30.0;
    run.seed = 8;
    run.tides = false;
    // a larger solenoid current makes the bias stand out of the noise
    run.bias_current = 0.3;
    const auto report = run_campaign_pipeline(run);
    const auto& r = report.result;
    const double zeeman = report.systematics.zeeman.value;
    REQUIRE(zeeman < -5.0 * r.delta_g_stat.uncertainty);
    // raw difference carries the bias, the corrected value does not
    CHECK(std::abs(r.delta_g_stat.value - zeeman) < 3.0 * r.delta_g_stat.uncertainty);
    CHECK(std::abs(r.delta_g_stat.value) > 3.0 * r.delta_g_stat.uncertainty);
    CHECK(std::abs(r.budget.corrected_value) < 3.0 * r.budget.corrected_uncertainty);
    CHECK(std::abs(r.eta.value) < 3.0 * r.eta.uncertainty);
}
