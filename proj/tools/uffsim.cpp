// uffsim: command-line front end for the dual-species free-fall simulator.

#include "uff/errors.hpp"
#include "uff/io.hpp"
#include "uff/pipeline.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_numerical = 2;
constexpr int exit_check = 3;

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string seed;
    std::string out;
    std::string hours;
    std::string noise;
    std::string systematics;
    bool check = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts)
{
    cmd->add_option("--config", opts.config_path, "key = value configuration file");
    cmd->add_option("--set", opts.overrides, "override a key, key=value (repeatable)");
    cmd->add_option("--seed", opts.seed, "random seed");
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_option("--hours", opts.hours, "campaign length in hours");
    cmd->add_option("--noise", opts.noise, "on/off");
    cmd->add_option("--systematics", opts.systematics, "on/off");
    cmd->add_flag("--check", opts.check, "run acceptance self-checks; exit 3 on failure");
}

uff::RunConfig build_config(const CommonOptions& opts)
{
    uff::RunConfig run;
    if (!opts.config_path.empty()) {
        run.load_file(opts.config_path);
    }
    for (const auto& o : opts.overrides) {
        run.apply_override(o);
    }
    if (!opts.seed.empty()) {
        run.set("run.seed", opts.seed);
    }
    if (!opts.out.empty()) {
        run.set("run.output_dir", opts.out);
    }
    if (!opts.hours.empty()) {
        run.set("campaign.hours", opts.hours);
    }
    if (!opts.noise.empty()) {
        run.set("noise.enabled", opts.noise);
    }
    if (!opts.systematics.empty()) {
        run.set("systematics.enabled", opts.systematics);
    }
    run.validate();
    return run;
}

fs::path output_dir(const uff::RunConfig& run)
{
    fs::path dir(run.output_dir);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw uff::ConfigError("cannot write " + path.string());
    }
    return out;
}

void write_json(const fs::path& path, const json& j)
{
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

class CheckList {
public:
    void expect(bool ok, const std::string& what)
    {
        std::cout << (ok ? "PASS " : "FAIL ") << what << '\n';
        failed_ = failed_ || !ok;
    }
    bool failed() const { return failed_; }

private:
    bool failed_ = false;
};

int cmd_constants(const uff::RunConfig& run)
{
    const auto c = run.constants();
    uff::CsvWriter csv(std::cout, {"name", "value"});
    auto row = [&](const std::string& name, double v) { csv.row({name, uff::format_double(v)}); };
    row("hbar_J_s", c.hbar);
    row("planck_J_s", c.planck);
    row("speed_of_light_m_s", c.speed_of_light);
    row("atom_mass_kg", c.atom_mass);
    row("wavelength_m", c.wavelength);
    row("wavenumber_1_m", c.wavenumber);
    row("k_eff_1_m", c.k_eff());
    row("recoil_omega_rad_s", c.recoil_omega);
    row("two_photon_recoil_velocity_m_s", c.two_photon_recoil_velocity());
    row("g_nominal_m_s2", c.g_nominal);
    row("hyperfine_splitting_Hz", c.hyperfine_splitting);
    for (int f = 0; f <= 3; ++f) {
        row("excited_offset_F" + std::to_string(f) + "_Hz", c.excited_offsets[static_cast<std::size_t>(f)]);
    }
    row("d2_linewidth_Hz", c.d2_linewidth);
    row("d2_reduced_dipole_C_m", c.d2_reduced_dipole);
    row("clock_quadratic_coeff_Hz_T2", c.clock_quadratic_coeff);
    return exit_ok;
}

int cmd_detuning(const uff::RunConfig& run, const std::vector<double>& bracket, bool sweep, bool check)
{
    const auto c = run.constants();
    uff::LaserField field = run.laser_template();
    const double lo = bracket.empty() ? run.bracket_low : bracket.at(0);
    const double hi = bracket.empty() ? run.bracket_high : bracket.at(1);
    if (!(hi > lo)) {
        throw uff::ConfigError("--bracket needs LOW < HIGH");
    }
    field.detuning = uff::balanced_detuning_solve(field, c, lo, hi);
    const double o1 = uff::two_photon_rabi(uff::state_f1, field, c);
    const double o2 = uff::two_photon_rabi(uff::state_f2, field, c);
    uff::CsvWriter csv(std::cout, {"quantity", "value"});
    csv.row({"balanced_detuning_Hz", uff::format_double(field.detuning)});
    csv.row({"rabi_F1_rad_s", uff::format_double(o1)});
    csv.row({"rabi_F2_rad_s", uff::format_double(o2)});

    if (sweep) {
        const auto dir = output_dir(run);
        auto out = open_output(dir / "detuning_sweep.csv");
        uff::CsvWriter table(out, {"detuning_Hz", "rabi_F1_rad_s", "rabi_F2_rad_s", "abs_difference_rad_s"});
        constexpr int steps = 90;
        for (int i = 0; i <= steps; ++i) {
            uff::LaserField f = field;
            f.detuning = lo + (hi - lo) * i / steps;
            const double a = uff::two_photon_rabi(uff::state_f1, f, c);
            const double b = uff::two_photon_rabi(uff::state_f2, f, c);
            table.row({f.detuning, a, b, std::abs(a) - std::abs(b)});
        }
    }
    if (check) {
        CheckList checks;
        checks.expect(std::abs(field.detuning - 3.1817e9) <= 5e6, "balanced detuning within 5 MHz of 3.1817 GHz");
        return checks.failed() ? exit_check : exit_ok;
    }
    return exit_ok;
}

int cmd_fringe(const uff::RunConfig& run, bool check)
{
    const auto c = run.constants();
    const auto config = run.interferometer(c);
    uff::NoiseModel noise;
    if (run.noise_enabled) {
        noise = uff::calibrate_noise(run.sensitivity, run.detection_sigma, run.vibration_common, config, c);
    }
    noise.raman_linewidth = uff::two_pi * run.raman_linewidth_hz;
    const uff::TideModel tide = uff::campaign_tide_model(run);
    uff::ShotEnvironment env;
    if (run.systematics_enabled && run.tides) {
        env.tide = &tide;
    }
    if (run.systematics_enabled && run.zeeman) {
        const auto profile = uff::campaign_profile(run);
        const auto traj = uff::make_trajectory(config, c);
        env.zeeman_bias_f1 = uff::zeeman_bias(profile, traj, uff::state_f1, config, c);
        env.zeeman_bias_f2 = uff::zeeman_bias(profile, traj, uff::state_f2, config, c);
    }
    env.k_tilde = run.k_tilde;

    const double alpha_center = uff::mid_fringe_chirp(c.g_nominal, config);
    const auto dir = output_dir(run);
    json meta = {{"points_per_period", run.points_per_period},
                 {"periods", run.periods},
                 {"chirp_span_rad_s2", run.periods * config.fringe_period()},
                 {"simulated_duration_s", run.points_per_period * run.periods * uff::pair_period(config)},
                 {"alpha_center_rad_s2", alpha_center}};
    std::vector<double> contrasts;
    std::vector<double> residuals;
    for (int f : {1, 2}) {
        const auto state = uff::hyperfine_state(f);
        const auto points = uff::fringe_scan(state, alpha_center, config, run.points_per_period, run.periods, noise,
                                             env, run.seed, c);
        const auto fit = uff::sine_fringe_fit(points, config, alpha_center);
        auto out = open_output(dir / ("fringe_F" + std::to_string(f) + ".csv"));
        uff::write_fringe_points(out, points);
        json entry = fit;
        entry["gravity_m_s2"] = fit.gravity(config, c.g_nominal);
        meta["F" + std::to_string(f)] = entry;
        contrasts.push_back(fit.contrast);
        residuals.push_back(fit.residual_rms);
        std::cout << "F=" << f << " contrast " << uff::format_double(fit.contrast) << " phase "
                  << uff::format_double(fit.phase) << " rad\n";
    }
    write_json(dir / "fringe_fit.json", meta);
    if (check) {
        CheckList checks;
        checks.expect(std::abs(contrasts[0] - contrasts[1]) < 0.1 * config.contrast, "fringes have similar contrast");
        if (!run.noise_enabled && !(run.systematics_enabled && run.tides)) {
            checks.expect(residuals[0] < 1e-12 && residuals[1] < 1e-12, "noiseless fit residuals below 1e-12");
        }
        return checks.failed() ? exit_check : exit_ok;
    }
    return exit_ok;
}

int cmd_allan(const uff::RunConfig& run, bool check)
{
    const auto report = uff::run_campaign_pipeline(run);
    const auto dir = output_dir(run);
    uff::write_allan_csv(dir / "allan.csv", report.allan);
    std::cout << "adev at 1 s (tau^-1/2 fit) " << uff::format_double(report.allan.slope_fit) << " g\n";
    std::cout << "fitted exponent " << uff::format_double(report.allan.fitted_exponent) << '\n';
    if (check) {
        CheckList checks;
        checks.expect(std::abs(report.allan.slope_fit / run.sensitivity - 1.0) <= 0.15,
                      "adev at 1 s within 15% of the configured sensitivity");
        checks.expect(report.allan.slope_fit / std::sqrt(20000.0) < 1e-9, "adev law below 1e-9 g at 20000 s");
        return checks.failed() ? exit_check : exit_ok;
    }
    return exit_ok;
}

int campaign_checks(const uff::RunConfig& run, const uff::CampaignReport& report)
{
    CheckList checks;
    const auto& r = report.result;
    const double duration = run.hours * 3600.0;
    // bins holding at least two scheduled pairs survive the analysis
    const auto c = run.constants();
    const auto plan = uff::schedule_shots(duration, run.interferometer(c));
    std::map<long long, std::size_t> pairs_per_bin;
    for (std::size_t p = 0; p < plan.pair_count; ++p) {
        ++pairs_per_bin[static_cast<long long>(std::floor(plan.pair_start(p) / run.bin_width))];
    }
    const auto expected_bins = std::count_if(pairs_per_bin.begin(), pairs_per_bin.end(),
                                             [](const auto& kv) { return kv.second >= 2; });
    checks.expect(r.bins.size() == static_cast<std::size_t>(expected_bins), "bin count matches the schedule");
    if (run.noise_enabled) {
        const double expected = run.sensitivity / std::sqrt(duration);
        checks.expect(std::abs(r.delta_g_stat.uncertainty / expected - 1.0) < 0.2,
                      "statistical uncertainty within 20% of sensitivity / sqrt(duration)");
        checks.expect(std::abs(report.allan.slope_fit / run.sensitivity - 1.0) <= 0.15,
                      "adev at 1 s within 15% of the configured sensitivity");
        const double injected = -4.0 * run.k_tilde;
        checks.expect(std::abs(r.eta.value - injected) <= 3.0 * r.eta.uncertainty,
                      "corrected eta within 3 sigma of the injected violation");
    }
    checks.expect(std::abs(r.k_tilde.value + r.eta.value / 4.0) == 0.0, "k_tilde = -eta/4");
    if (run.systematics_enabled && run.tides) {
        checks.expect(std::abs(report.systematics.tide.value) <= 1e-11, "tide lag bias below 1e-11 g");
    }
    return checks.failed() ? exit_check : exit_ok;
}

int cmd_campaign(const uff::RunConfig& run, bool check)
{
    const auto report = uff::run_campaign_pipeline(run);
    uff::write_campaign_outputs(output_dir(run), report);
    const auto& r = report.result;
    std::cout << "pairs " << r.pair_delta_g.size() << ", bins " << r.bins.size() << '\n';
    std::cout << "delta g " << uff::format_double(r.delta_g_stat.value) << " +- "
              << uff::format_double(r.delta_g_stat.uncertainty) << " g\n";
    std::cout << uff::format_budget_table(r.budget);
    std::cout << "eta " << uff::format_double(r.eta.value) << " +- " << uff::format_double(r.eta.uncertainty) << '\n';
    std::cout << "k_tilde " << uff::format_double(r.k_tilde.value) << " +- "
              << uff::format_double(r.k_tilde.uncertainty) << '\n';
    return check ? campaign_checks(run, report) : exit_ok;
}

int cmd_zeeman_modulation(const uff::RunConfig& run, const std::vector<double>& currents, bool check)
{
    std::set<double> distinct(currents.begin(), currents.end());
    if (distinct.size() < 3) {
        throw uff::ConfigError("the quadratic fit needs at least three distinct currents");
    }
    const auto c = run.constants();
    const auto config = run.interferometer(c);
    const auto base = run.profile_path.empty() ? uff::default_magnetic_profile()
                                               : uff::load_magnetic_profile(run.profile_path);
    const auto curve = uff::zeeman_modulation_curve(base, currents, config, c);
    const auto dir = output_dir(run);
    {
        auto out = open_output(dir / "zeeman_modulation.csv");
        uff::CsvWriter csv(out, {"current_A", "bias_field_T", "bias_field_mG", "delta_g"});
        for (const auto& p : curve.points) {
            csv.row({p.current, p.bias_field, p.bias_field * 1e7, p.delta_g});
        }
    }
    const double i_max = *distinct.rbegin();
    json fit = {{"c0", curve.c0},
                {"c1_per_A", curve.c1},
                {"c2_per_A2", curve.c2},
                {"bias_scale_T_per_A", base.bias_scale()},
                {"bias_field_at_100mA_mG", base.bias_scale() * 0.1 * 1e7},
                {"quadratic_to_linear_at_max", std::abs(curve.c2 * i_max * i_max) / std::abs(curve.c1 * i_max)}};
    write_json(dir / "zeeman_fit.json", fit);
    std::cout << "fit c0 " << uff::format_double(curve.c0) << " c1 " << uff::format_double(curve.c1) << " c2 "
              << uff::format_double(curve.c2) << '\n';
    std::cout << "bias field at 100 mA " << uff::format_double(base.bias_scale() * 0.1 * 1e7) << " mG\n";
    if (check) {
        CheckList checks;
        checks.expect(std::abs(curve.c2 * i_max * i_max) > 10.0 * std::abs(curve.c1 * i_max),
                      "quadratic term dominates the linear one at the largest current");
        checks.expect(std::abs(base.bias_scale() * 0.1 * 1e7 - 90.0) < 1e-9, "90 mG at 100 mA");
        return checks.failed() ? exit_check : exit_ok;
    }
    return exit_ok;
}

int cmd_budget(const uff::RunConfig& run, const std::vector<double>& stat, bool check)
{
    uff::SystematicBudget budget;
    if (stat.empty()) {
        budget = uff::run_campaign_pipeline(run).result.budget;
    } else {
        const auto c = run.constants();
        const auto config = run.interferometer(c);
        const auto pulses = uff::calibrate_pulses(config, c);
        const auto field = uff::operating_field(run, c);
        const auto sys = uff::evaluate_systematics(run, config, c, pulses, field);
        uff::SystematicShift row{uff::Channel::statistical, stat.at(0), stat.at(1), "given"};
        budget = uff::assemble_budget(row, sys.zeeman, sys.ac_stark, sys.tide_row);
    }
    std::cout << uff::format_budget_table(budget);
    const auto dir = output_dir(run);
    write_json(dir / "budget.json", budget);
    auto out = open_output(dir / "budget.txt");
    out << uff::format_budget_table(budget);
    if (check) {
        CheckList checks;
        double sq = 0.0;
        for (const auto& r : budget.rows) {
            sq += r.uncertainty * r.uncertainty;
        }
        checks.expect(std::abs(std::sqrt(sq) - budget.corrected_uncertainty) <= 1e-15,
                      "corrected uncertainty is the RSS of the rows");
        return checks.failed() ? exit_check : exit_ok;
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dual-state atom-interferometer free-fall test simulator"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::vector<double> bracket;
    bool sweep = false;
    std::vector<double> currents{0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
    std::vector<double> stat_row;

    auto* constants = app.add_subcommand("constants", "print the physical constants");
    auto* detuning = app.add_subcommand("detuning", "solve for the balanced Bragg detuning");
    auto* fringe = app.add_subcommand("fringe", "simulate and fit one fringe per state");
    auto* allan = app.add_subcommand("allan", "Allan deviation of the differential series");
    auto* campaign = app.add_subcommand("campaign", "full campaign with analysis and budget");
    auto* zeeman = app.add_subcommand("zeeman-modulation", "differential Zeeman bias versus solenoid current");
    auto* budget = app.add_subcommand("budget", "systematic budget table");
    for (auto* cmd : {constants, detuning, fringe, allan, campaign, zeeman, budget}) {
        add_common(cmd, opts);
    }
    detuning->add_option("--bracket", bracket, "search bracket LOW HIGH in Hz")->expected(2);
    detuning->add_flag("--sweep", sweep, "write the Rabi frequencies across the bracket");
    zeeman->add_option("--currents", currents, "solenoid currents in A")->delimiter(',');
    budget->add_option("--stat", stat_row, "statistical row VALUE,UNCERTAINTY (units of g) instead of a campaign")
        ->delimiter(',')
        ->expected(2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        const uff::RunConfig run = build_config(opts);
        if (constants->parsed()) {
            return cmd_constants(run);
        }
        if (detuning->parsed()) {
            return cmd_detuning(run, bracket, sweep, opts.check);
        }
        if (fringe->parsed()) {
            return cmd_fringe(run, opts.check);
        }
        if (allan->parsed()) {
            return cmd_allan(run, opts.check);
        }
        if (campaign->parsed()) {
            return cmd_campaign(run, opts.check);
        }
        if (zeeman->parsed()) {
            return cmd_zeeman_modulation(run, currents, opts.check);
        }
        if (budget->parsed()) {
            return cmd_budget(run, stat_row, opts.check);
        }
    } catch (const uff::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_usage;
}
