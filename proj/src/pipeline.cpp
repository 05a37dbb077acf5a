#include "uff/pipeline.hpp"

#include "uff/errors.hpp"
#include "uff/io.hpp"

#include <cmath>
#include <fstream>

namespace uff {

PulseCalibration calibrate_pulses(const InterferometerConfig& config, const PhysicalConstants& c)
{
    PulseCalibration out;
    out.pi_pulse = calibrate_pi_pulse(config.pulse_sigma(), config, c);
    out.half_pi = half_pi_pulse(out.pi_pulse, config, c);
    return out;
}

LaserField operating_field(const RunConfig& run, const PhysicalConstants& c)
{
    LaserField field = run.laser_template();
    if (run.detuning == 0.0) {
        field.detuning = balanced_detuning_solve(field, c, run.bracket_low, run.bracket_high);
    }
    return field;
}

MagneticProfile campaign_profile(const RunConfig& run)
{
    const MagneticProfile base = run.profile_path.empty() ? default_magnetic_profile()
                                                          : load_magnetic_profile(run.profile_path);
    return base.at_current(run.bias_current);
}

TideModel campaign_tide_model(const RunConfig& run)
{
    return run.tide_path.empty() ? default_tide_model() : load_tide_model(run.tide_path);
}

SystematicsReport evaluate_systematics(const RunConfig& run, const InterferometerConfig& config,
                                       const PhysicalConstants& c, const PulseCalibration& pulses,
                                       const LaserField& field)
{
    SystematicsReport out;
    out.zeeman.channel = Channel::quadratic_zeeman;
    out.ac_stark.channel = Channel::ac_stark;
    out.tide.channel = Channel::tide;
    out.tide_row.channel = Channel::tide;
    if (!run.systematics_enabled) {
        out.notices.push_back("systematics disabled; budget rows are zero");
        return out;
    }

    if (run.zeeman) {
        const MagneticProfile profile = campaign_profile(run);
        const Trajectory traj = make_trajectory(config, c);
        out.zeeman_bias_f1 = zeeman_bias(profile, traj, state_f1, config, c);
        out.zeeman_bias_f2 = zeeman_bias(profile, traj, state_f2, config, c);
        out.zeeman.value = out.zeeman_bias_f1 - out.zeeman_bias_f2;
        out.zeeman.uncertainty = run.zeeman_uncertainty;
        out.zeeman.note = "two-arm integral over the magnetic profile";
    }

    out.ac_stark_only = ac_stark_bound(run.intensity_gradient_fraction, run.pulse_imbalance_fraction,
                                       pulses.pi_pulse.peak_rabi, config, c);
    out.two_photon = two_photon_light_shift_bound(run.detuning_error, field, pulses.half_pi, config, c);
    out.ac_stark.uncertainty = out.ac_stark_only.uncertainty + out.two_photon.uncertainty;
    out.ac_stark.note = "bound: intensity gradient, pulse imbalance, frequency error";

    if (run.tides) {
        const TideModel model = campaign_tide_model(run);
        const double duration = run.hours * 3600.0;
        double window = duration;
        if (window < model.longest_period()) {
            window = model.longest_period();
            out.notices.push_back("tide lag bias averaged over the longest constituent period, not the campaign");
        }
        out.tide = tide_alternation_bias(model, config.alternation_lag, window, c.g_nominal);
        out.tide_row.uncertainty = std::abs(out.tide.value);
        out.tide_row.note = "alternation lag bias";
    }
    return out;
}

CampaignSettings campaign_settings(const RunConfig& run, const InterferometerConfig& config,
                                   const PhysicalConstants& c, const SystematicsReport& systematics)
{
    CampaignSettings s;
    s.duration = run.hours * 3600.0;
    s.seed = run.seed;
    if (run.noise_enabled) {
        s.noise = calibrate_noise(run.sensitivity, run.detection_sigma, run.vibration_common, config, c);
    }
    s.noise.raman_linewidth = two_pi * run.raman_linewidth_hz;
    s.tides = run.systematics_enabled && run.tides;
    s.zeeman = run.systematics_enabled && run.zeeman;
    if (s.tides) {
        s.tide_model = campaign_tide_model(run);
    }
    s.zeeman_bias_f1 = systematics.zeeman_bias_f1;
    s.zeeman_bias_f2 = systematics.zeeman_bias_f2;
    s.k_tilde = run.k_tilde;
    return s;
}

CampaignReport run_campaign_pipeline(const RunConfig& run)
{
    run.validate();
    CampaignReport report;
    report.run = run;
    const PhysicalConstants c = run.constants();
    const InterferometerConfig config = run.interferometer(c);
    const LaserField field = operating_field(run, c);
    report.detuning_hz = field.detuning;
    report.pulses = calibrate_pulses(config, c);
    report.systematics = evaluate_systematics(run, config, c, report.pulses, field);

    const CampaignSettings settings = campaign_settings(run, config, c, report.systematics);
    report.noise = settings.noise;
    report.records = run_campaign(settings, config, c);
    report.result = differential_analysis(report.records, run.bin_width, config, c);
    finalize_result(report.result, report.systematics.zeeman, report.systematics.ac_stark,
                    report.systematics.tide_row, c.g_nominal);

    const double tau0 = pair_period(config);
    report.allan = allan_deviation(report.result.pair_delta_g, tau0,
                                   octave_taus(report.result.pair_delta_g.size(), tau0, {20000.0}));
    return report;
}

nlohmann::json campaign_report_json(const CampaignReport& report)
{
    using nlohmann::json;
    const auto& r = report.result;
    json allan = {{"sample_interval_s", report.allan.taus.empty() ? 0.0 : report.allan.taus.front()},
                  {"amplitude_at_1s_g", report.allan.slope_fit},
                  {"fitted_exponent", report.allan.fitted_exponent},
                  {"notices", report.allan.notices}};
    const auto& s = report.systematics;
    json systematics = {{"zeeman_bias_F1_g", s.zeeman_bias_f1},
                        {"zeeman_bias_F2_g", s.zeeman_bias_f2},
                        {"ac_stark_bound_g", s.ac_stark_only.uncertainty},
                        {"two_photon_light_shift_g", s.two_photon.value},
                        {"tide_lag_bias_mean_g", s.tide.value},
                        {"tide_lag_bias_max_g", s.tide.uncertainty},
                        {"notices", s.notices}};
    json config = json::object();
    for (const auto& key : config_keys()) {
        // the output location does not change the results
        if (key.key != "run.output_dir") {
            config[key.key] = report.run.get(key.key);
        }
    }
    json out = {
        {"config", config},
        {"balanced_detuning_Hz", report.detuning_hz},
        {"pi_pulse", report.pulses.pi_pulse},
        {"half_pi_pulse", report.pulses.half_pi},
        {"noise",
         {{"per_point_phase_sigma_rad", report.noise.per_shot_phase_sigma},
          {"detection_sigma", report.noise.detection_sigma},
          {"vibration_common_rad", report.noise.vibration_common}}},
        {"points", report.records.size()},
        {"pairs", r.pair_delta_g.size()},
        {"bins", r.bins.size()},
        {"mean_g_m_s2", r.mean_g},
        {"delta_g_stat_g", r.delta_g_stat},
        {"budget", r.budget},
        {"eta", r.eta},
        {"k_tilde", r.k_tilde},
        {"r_diff", r.r_diff},
        {"allan", allan},
        {"systematics", systematics},
        {"notices", r.notices},
    };
    return out;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    return out;
}

} // namespace

void write_allan_csv(const std::filesystem::path& path, const AllanSeries& allan)
{
    auto out = open_output(path);
    CsvWriter csv(out, {"tau_s", "adev_g", "cluster_size"});
    for (std::size_t i = 0; i < allan.taus.size(); ++i) {
        csv.row({allan.taus[i], allan.deviations[i], static_cast<double>(allan.cluster_sizes[i])});
    }
}

void write_campaign_outputs(const std::filesystem::path& dir, const CampaignReport& report)
{
    std::filesystem::create_directories(dir);
    {
        auto out = open_output(dir / "records.csv");
        write_shot_records(out, report.records);
    }
    {
        auto out = open_output(dir / "bins.csv");
        CsvWriter csv(out, {"time_s", "g_F1_m_s2", "g_F2_m_s2", "delta_g", "delta_g_sigma", "pairs"});
        for (const auto& b : report.result.bins) {
            csv.row({b.time, b.g_f1, b.g_f2, b.delta_g, b.delta_g_sigma, static_cast<double>(b.pairs)});
        }
    }
    write_allan_csv(dir / "allan.csv", report.allan);
    {
        auto out = open_output(dir / "report.json");
        out << campaign_report_json(report).dump(2) << '\n';
    }
    auto budget = open_output(dir / "budget.txt");
    budget << format_budget_table(report.result.budget);
}

} // namespace uff
