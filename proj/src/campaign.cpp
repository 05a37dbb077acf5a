#include "uff/campaign.hpp"

#include "uff/errors.hpp"

#include <cmath>
#include <map>

namespace uff {

ShotPlan schedule_shots(double duration, const InterferometerConfig& config)
{
    config.validate();
    if (!(duration >= 4.0)) {
        throw DomainError("campaign duration must be at least 4 s");
    }
    if (config.alternation_lag < 2.0 * config.cycle_time) {
        throw DomainError("alternation lag must hold the two shots of a point");
    }
    ShotPlan plan;
    plan.duration = duration;
    plan.pair_period = pair_period(config);
    // small tolerance so 63 h / 4 s is not lost to rounding
    plan.pair_count = static_cast<std::size_t>(std::floor(duration / plan.pair_period + 1e-9));
    plan.shots.reserve(4 * plan.pair_count);
    for (std::size_t p = 0; p < plan.pair_count; ++p) {
        const double start = plan.pair_start(p);
        for (int k = 0; k < 2; ++k) {
            const int f = k == 0 ? 2 : 1;
            const double t = start + k * config.alternation_lag;
            const std::size_t point = 2 * p + static_cast<std::size_t>(k);
            plan.shots.push_back({t, f, PeakRole::peak1, point, p});
            plan.shots.push_back({t + config.cycle_time, f, PeakRole::peak2, point, p});
        }
    }
    return plan;
}

std::vector<ShotRecord> run_campaign(const CampaignSettings& settings, const InterferometerConfig& config,
                                     const PhysicalConstants& c)
{
    settings.noise.validate();
    if (settings.tides) {
        settings.tide_model.validate();
    }
    const ShotPlan plan = schedule_shots(settings.duration, config);
    ShotEnvironment base;
    base.tide = settings.tides ? &settings.tide_model : nullptr;
    base.zeeman_bias_f1 = settings.zeeman ? settings.zeeman_bias_f1 : 0.0;
    base.zeeman_bias_f2 = settings.zeeman ? settings.zeeman_bias_f2 : 0.0;
    base.k_tilde = settings.k_tilde;

    std::vector<ShotRecord> records;
    records.reserve(plan.point_count());
    std::size_t current_pair = plan.pair_count;
    ShotEnvironment env = base;
    for (const PlannedShot& shot : plan.shots) {
        if (shot.role != PeakRole::peak1) {
            continue;
        }
        if (shot.pair_index != current_pair) {
            current_pair = shot.pair_index;
            RngStream vib(settings.seed, shot.pair_index, 0);
            env.common_phase = vib.normal(settings.noise.vibration_common);
        }
        const HyperfineState state = hyperfine_state(shot.state_f);
        const double predicted = c.g_nominal + (base.tide != nullptr ? tide_g(shot.timestamp, *base.tide) : 0.0);
        const double alpha = mid_fringe_chirp(predicted, config);
        RngStream rng(settings.seed, shot.pair_index, static_cast<std::uint64_t>(shot.state_f));
        records.push_back(simulate_shot(state, alpha, shot.timestamp, config, settings.noise, env, rng, c));
    }
    return records;
}

namespace {

struct BinAccumulator {
    double g_f1 = 0.0;
    double g_f2 = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t pairs = 0;
    std::size_t f1_points = 0;
    std::size_t f2_points = 0;
};

} // namespace

CampaignResult differential_analysis(const std::vector<ShotRecord>& records, double bin_width,
                                     const InterferometerConfig& config, const PhysicalConstants& c)
{
    if (!(bin_width > 0.0)) {
        throw DomainError("bin width must be positive");
    }
    CampaignResult result;
    if (records.empty()) {
        throw DomainError("no records to analyse");
    }

    // F=2 points keyed by timestamp in milliseconds
    std::map<long long, const ShotRecord*> f2_points;
    double t_lo = records.front().timestamp;
    double t_hi = t_lo;
    double g_sum = 0.0;
    for (const auto& r : records) {
        t_lo = std::min(t_lo, r.timestamp);
        t_hi = std::max(t_hi, r.timestamp);
        if (r.state_f == 2) {
            f2_points[std::llround(r.timestamp * 1000.0)] = &r;
        } else if (r.state_f != 1) {
            throw DomainError("record with unknown state F=" + std::to_string(r.state_f));
        }
        g_sum += mid_fringe_gravity(r.probability, r.alpha, config);
    }
    if (t_hi - t_lo < bin_width) {
        throw DomainError("records span less than one bin width");
    }
    result.mean_g = g_sum / static_cast<double>(records.size());

    std::map<long long, BinAccumulator> bins;
    const long long lag_ms = std::llround(config.alternation_lag * 1000.0);
    for (const auto& r : records) {
        const auto bin_index = static_cast<long long>(std::floor(r.timestamp / bin_width));
        const double g = mid_fringe_gravity(r.probability, r.alpha, config);
        BinAccumulator& acc = bins[bin_index];
        if (r.state_f == 2) {
            acc.g_f2 += g;
            ++acc.f2_points;
            continue;
        }
        acc.g_f1 += g;
        ++acc.f1_points;
        const auto it = f2_points.find(std::llround(r.timestamp * 1000.0) - lag_ms);
        if (it == f2_points.end()) {
            continue;
        }
        const ShotRecord& partner = *it->second;
        const double d = (g - mid_fringe_gravity(partner.probability, partner.alpha, config)) / c.g_nominal;
        // the pair belongs to the bin of its F=2 point
        BinAccumulator& pair_bin = bins[static_cast<long long>(std::floor(partner.timestamp / bin_width))];
        pair_bin.sum += d;
        pair_bin.sum_sq += d * d;
        ++pair_bin.pairs;
        result.pair_times.push_back(partner.timestamp);
        result.pair_delta_g.push_back(d);
    }

    std::vector<double> values, sigmas;
    std::size_t dropped = 0;
    for (const auto& [index, acc] : bins) {
        if (acc.f1_points == 0 || acc.f2_points == 0) {
            result.notices.push_back("bin at " + std::to_string(index * bin_width) + " s holds a single state; dropped");
            ++dropped;
            continue;
        }
        if (acc.pairs < 2) {
            result.notices.push_back("bin at " + std::to_string(index * bin_width) + " s holds fewer than two pairs; dropped");
            ++dropped;
            continue;
        }
        CampaignBin bin;
        bin.time = (static_cast<double>(index) + 0.5) * bin_width;
        bin.g_f1 = acc.g_f1 / static_cast<double>(acc.f1_points);
        bin.g_f2 = acc.g_f2 / static_cast<double>(acc.f2_points);
        bin.pairs = acc.pairs;
        const double n = static_cast<double>(acc.pairs);
        bin.delta_g = acc.sum / n;
        const double var = std::max(0.0, (acc.sum_sq - n * bin.delta_g * bin.delta_g) / (n - 1.0));
        bin.delta_g_sigma = std::sqrt(var / n);
        result.bins.push_back(bin);
    }
    if (result.bins.empty()) {
        throw DomainError("no usable bins");
    }

    bool all_exact = true;
    for (const auto& b : result.bins) {
        if (b.delta_g_sigma > 0.0) {
            all_exact = false;
            values.push_back(b.delta_g);
            sigmas.push_back(b.delta_g_sigma);
        }
    }
    if (all_exact) {
        // noiseless input: plain mean, no scatter
        double sum = 0.0;
        for (const auto& b : result.bins) {
            sum += b.delta_g;
        }
        result.delta_g_stat = {sum / static_cast<double>(result.bins.size()), 0.0};
    } else {
        if (values.size() != result.bins.size()) {
            result.notices.push_back("bins with zero scatter left out of the weighted mean");
        }
        result.delta_g_stat = weighted_mean(values, sigmas);
    }
    return result;
}

double eotvos_ratio(double g1, double g2)
{
    if (!(g1 + g2 > 0.0)) {
        throw DomainError("g1 + g2 must be positive");
    }
    return 2.0 * (g1 - g2) / (g1 + g2);
}

Measured k_tilde_bound(const Measured& eta)
{
    return {-eta.value / 4.0, eta.uncertainty / 4.0};
}

Measured r_diff(const Measured& eta)
{
    return eta;
}

SystematicBudget assemble_budget(const SystematicShift& statistical, const SystematicShift& zeeman,
                                 const SystematicShift& ac_stark, const SystematicShift& tide)
{
    SystematicBudget budget;
    budget.rows = {statistical, zeeman, ac_stark, tide};
    budget.corrected_value = statistical.value - zeeman.value - ac_stark.value - tide.value;
    double sq = 0.0;
    for (const auto& row : budget.rows) {
        sq += row.uncertainty * row.uncertainty;
    }
    budget.corrected_uncertainty = std::sqrt(sq);
    return budget;
}

void finalize_result(CampaignResult& result, const SystematicShift& zeeman, const SystematicShift& ac_stark,
                     const SystematicShift& tide, double g_unit)
{
    SystematicShift stat;
    stat.channel = Channel::statistical;
    stat.value = result.delta_g_stat.value;
    stat.uncertainty = result.delta_g_stat.uncertainty;
    stat.note = "weighted mean over bins";
    result.budget = assemble_budget(stat, zeeman, ac_stark, tide);

    const double g_ref = result.mean_g > 0.0 ? result.mean_g : g_unit;
    const double delta = result.budget.corrected_value * g_unit;
    result.eta = {eotvos_ratio(g_ref + 0.5 * delta, g_ref - 0.5 * delta),
                  result.budget.corrected_uncertainty * g_unit / g_ref};
    result.k_tilde = k_tilde_bound(result.eta);
    result.r_diff = r_diff(result.eta);
}

} // namespace uff
