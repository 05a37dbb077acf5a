#pragma once

#include "uff/constants.hpp"
#include "uff/detection.hpp"
#include "uff/interferometer.hpp"
#include "uff/model.hpp"
#include "uff/systematics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace uff {

enum class PeakRole { peak1, peak2 };

/// One 1 s cycle of the apparatus.
struct PlannedShot {
    double timestamp = 0.0;
    int state_f = 0;
    PeakRole role = PeakRole::peak1;
    std::size_t point_index = 0;
    std::size_t pair_index = 0;
};

/// Interleaved acquisition: each probability point takes two shots (one per
/// Raman peak); an F=2 point is followed by an F=1 point one alternation lag
/// later. Only complete pairs that fit inside the duration are planned.
struct ShotPlan {
    std::vector<PlannedShot> shots;
    std::size_t pair_count = 0;
    double pair_period = 0.0;
    double duration = 0.0;

    std::size_t point_count() const { return 2 * pair_count; }
    /// Start time of the F=2 point of a pair.
    double pair_start(std::size_t pair) const { return static_cast<double>(pair) * pair_period; }
};

ShotPlan schedule_shots(double duration, const InterferometerConfig& config);

struct CampaignSettings {
    double duration = 63.0 * 3600.0;
    std::uint64_t seed = 1;
    NoiseModel noise;
    bool tides = true;
    bool zeeman = true;
    TideModel tide_model;
    double zeeman_bias_f1 = 0.0;   // units of g
    double zeeman_bias_f2 = 0.0;   // units of g
    double k_tilde = 0.0;
};

/// Simulate every planned point. Chirps follow the tide model (feed-forward)
/// so each point sits near mid-fringe. Deterministic per seed.
std::vector<ShotRecord> run_campaign(const CampaignSettings& settings, const InterferometerConfig& config,
                                     const PhysicalConstants& c);

struct CampaignBin {
    double time = 0.0;        // s, bin centre
    double g_f1 = 0.0;        // m/s^2
    double g_f2 = 0.0;        // m/s^2
    double delta_g = 0.0;     // units of g
    double delta_g_sigma = 0.0;
    std::size_t pairs = 0;
};

struct SystematicBudget {
    std::vector<SystematicShift> rows;
    double corrected_value = 0.0;
    double corrected_uncertainty = 0.0;
};

struct CampaignResult {
    std::vector<CampaignBin> bins;
    std::vector<double> pair_times;          // s, F=2 timestamp of each matched pair
    std::vector<double> pair_delta_g;        // units of g
    Measured delta_g_stat;                   // units of g
    double mean_g = 0.0;                     // m/s^2, mean of both states
    SystematicBudget budget;
    Measured eta;
    Measured k_tilde;
    Measured r_diff;
    std::vector<std::string> notices;
};

/// Pair F=1 points with the F=2 point one lag earlier, bin the pair
/// differences, and take the weighted mean over bins. Bins missing either
/// state or holding fewer than two pairs are dropped with a notice.
CampaignResult differential_analysis(const std::vector<ShotRecord>& records, double bin_width,
                                     const InterferometerConfig& config, const PhysicalConstants& c);

/// 2 (g1 - g2) / (g1 + g2)
double eotvos_ratio(double g1, double g2);

/// k_tilde = -eta / 4 (|F_perp|^2 differs by 4 between the states).
Measured k_tilde_bound(const Measured& eta);

/// r1 - r2, numerically equal to eta.
Measured r_diff(const Measured& eta);

/// corrected = statistical - sum of the other rows' values; uncertainty is the
/// root-sum-square of every row.
SystematicBudget assemble_budget(const SystematicShift& statistical, const SystematicShift& zeeman,
                                 const SystematicShift& ac_stark, const SystematicShift& tide);

/// Fill budget, eta, k_tilde and r_diff of a partial result. eta is referred
/// to the measured mean g.
void finalize_result(CampaignResult& result, const SystematicShift& zeeman, const SystematicShift& ac_stark,
                     const SystematicShift& tide, double g_unit);

} // namespace uff
