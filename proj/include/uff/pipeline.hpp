#pragma once

#include "uff/bragg.hpp"
#include "uff/campaign.hpp"
#include "uff/detection.hpp"
#include "uff/run_config.hpp"
#include "uff/systematics.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace uff {

struct PulseCalibration {
    PulseWaveform pi_pulse;
    PulseWaveform half_pi;
};

PulseCalibration calibrate_pulses(const InterferometerConfig& config, const PhysicalConstants& c);

/// Laser field at the configured detuning, or at the balanced point when the
/// detuning is "auto".
LaserField operating_field(const RunConfig& run, const PhysicalConstants& c);

MagneticProfile campaign_profile(const RunConfig& run);
TideModel campaign_tide_model(const RunConfig& run);

struct SystematicsReport {
    double zeeman_bias_f1 = 0.0;   // units of g
    double zeeman_bias_f2 = 0.0;
    SystematicShift zeeman;
    SystematicShift ac_stark;       // AC Stark plus two-photon light shift bounds
    SystematicShift ac_stark_only;
    SystematicShift two_photon;
    SystematicShift tide;           // lag bias; value carries the mean, uncertainty 0
    SystematicShift tide_row;       // budget row (0, |mean lag bias|)
    std::vector<std::string> notices;
};

SystematicsReport evaluate_systematics(const RunConfig& run, const InterferometerConfig& config,
                                       const PhysicalConstants& c, const PulseCalibration& pulses,
                                       const LaserField& field);

struct CampaignReport {
    RunConfig run;
    double detuning_hz = 0.0;
    PulseCalibration pulses;
    NoiseModel noise;
    std::vector<ShotRecord> records;
    CampaignResult result;
    AllanSeries allan;
    SystematicsReport systematics;
};

/// Schedule, simulate, analyse, and budget one campaign.
CampaignReport run_campaign_pipeline(const RunConfig& run);

/// Settings for run_campaign derived from a run configuration.
CampaignSettings campaign_settings(const RunConfig& run, const InterferometerConfig& config,
                                   const PhysicalConstants& c, const SystematicsReport& systematics);

nlohmann::json campaign_report_json(const CampaignReport& report);

void write_allan_csv(const std::filesystem::path& path, const AllanSeries& allan);

/// records.csv, bins.csv, allan.csv, report.json and budget.txt in `dir`.
void write_campaign_outputs(const std::filesystem::path& dir, const CampaignReport& report);

} // namespace uff
