#include "uff/run_config.hpp"

#include "uff/errors.hpp"
#include "uff/io.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace uff {
namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' expects a number, got '" + text + "'");
    }
    if (pos != text.size() || !std::isfinite(v)) {
        throw ConfigError("key '" + key + "' expects a number, got '" + text + "'");
    }
    return v;
}

long long parse_int(const std::string& key, const std::string& text)
{
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &pos);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' expects an integer, got '" + text + "'");
    }
    if (pos != text.size()) {
        throw ConfigError("key '" + key + "' expects an integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "on" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "off" || text == "0" || text == "no") {
        return false;
    }
    throw ConfigError("key '" + key + "' expects true/false, got '" + text + "'");
}

struct Binding {
    std::string description;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

Binding real(double RunConfig::*field, std::string description)
{
    return {std::move(description),
            [field](RunConfig& cfg, const std::string& key, const std::string& v) {
                cfg.*field = parse_double(key, v);
            },
            [field](const RunConfig& cfg) { return format_double(cfg.*field); }};
}

// zero stands for "auto"
Binding real_or_auto(double RunConfig::*field, std::string description)
{
    return {std::move(description),
            [field](RunConfig& cfg, const std::string& key, const std::string& v) {
                cfg.*field = v == "auto" ? 0.0 : parse_double(key, v);
            },
            [field](const RunConfig& cfg) {
                return cfg.*field == 0.0 ? std::string("auto") : format_double(cfg.*field);
            }};
}

Binding integer(int RunConfig::*field, std::string description)
{
    return {std::move(description),
            [field](RunConfig& cfg, const std::string& key, const std::string& v) {
                cfg.*field = static_cast<int>(parse_int(key, v));
            },
            [field](const RunConfig& cfg) { return std::to_string(cfg.*field); }};
}

Binding flag(bool RunConfig::*field, std::string description)
{
    return {std::move(description),
            [field](RunConfig& cfg, const std::string& key, const std::string& v) {
                cfg.*field = parse_bool(key, v);
            },
            [field](const RunConfig& cfg) { return std::string(cfg.*field ? "true" : "false"); }};
}

Binding text(std::string RunConfig::*field, std::string description)
{
    return {std::move(description),
            [field](RunConfig& cfg, const std::string&, const std::string& v) { cfg.*field = v; },
            [field](const RunConfig& cfg) { return cfg.*field; }};
}

const std::map<std::string, Binding>& bindings()
{
    static const std::map<std::string, Binding> table = {
        {"interferometer.T_s", real(&RunConfig::pulse_separation, "pulse separation T")},
        {"interferometer.order", integer(&RunConfig::bragg_order, "Bragg order n")},
        {"interferometer.pi_pulse_fwhm_s", real(&RunConfig::pi_pulse_fwhm, "FWHM of the pi-pulse Rabi envelope")},
        {"interferometer.momentum_width_hk",
         real(&RunConfig::momentum_width, "e^-2 half-width of the vertical momentum distribution")},
        {"interferometer.momentum_samples",
         integer(&RunConfig::momentum_samples, "quantile nodes for the efficiency average")},
        {"interferometer.fountain_height_m", real(&RunConfig::fountain_height, "apex height of the fountain")},
        {"interferometer.launch_velocity_m_s",
         real_or_auto(&RunConfig::launch_velocity, "launch velocity; auto = sqrt(2 g h)")},
        {"interferometer.cycle_time_s", real(&RunConfig::cycle_time, "duration of one shot")},
        {"interferometer.alternation_lag_s",
         real(&RunConfig::alternation_lag, "delay of the F=1 point after the F=2 point")},
        {"interferometer.contrast", real(&RunConfig::contrast, "fringe contrast")},
        {"interferometer.offset", real(&RunConfig::offset, "fringe offset")},
        {"interferometer.ladder_half_width", integer(&RunConfig::ladder_half_width, "momentum orders kept, -M..M")},
        {"constants.g_nominal_m_s2", real(&RunConfig::g_nominal, "nominal local gravity")},
        {"laser.total_power_W", real(&RunConfig::total_power, "total Bragg power in both beams")},
        {"laser.beam_diameter_m", real(&RunConfig::beam_diameter, "e^-2 beam diameter")},
        {"laser.intensity_ratio", real(&RunConfig::intensity_ratio, "intensity of beam 1 over beam 2")},
        {"laser.detuning_Hz",
         real_or_auto(&RunConfig::detuning, "detuning from F=2 -> F'=3; auto = balanced point")},
        {"laser.bracket_low_Hz", real(&RunConfig::bracket_low, "lower end of the balanced-detuning search")},
        {"laser.bracket_high_Hz", real(&RunConfig::bracket_high, "upper end of the balanced-detuning search")},
        {"noise.enabled", flag(&RunConfig::noise_enabled, "simulate phase and detection noise")},
        {"noise.sensitivity_g_rtHz", real(&RunConfig::sensitivity, "differential sensitivity at 1 s, units of g")},
        {"noise.detection_sigma", real(&RunConfig::detection_sigma, "detection noise per probability")},
        {"noise.vibration_common_rad", real(&RunConfig::vibration_common, "vibration phase common to a pair")},
        {"detection.raman_linewidth_Hz", real(&RunConfig::raman_linewidth_hz, "FWHM of each Raman peak")},
        {"systematics.enabled", flag(&RunConfig::systematics_enabled, "master switch for tides and Zeeman")},
        {"systematics.tides", flag(&RunConfig::tides, "include the tide model")},
        {"systematics.zeeman", flag(&RunConfig::zeeman, "include the quadratic Zeeman bias")},
        {"systematics.profile_path", text(&RunConfig::profile_path, "magnetic profile file; empty = built-in")},
        {"systematics.tide_path", text(&RunConfig::tide_path, "tide table file; empty = built-in")},
        {"systematics.bias_current_A", real(&RunConfig::bias_current, "solenoid current during the campaign")},
        {"systematics.zeeman_uncertainty_g", real(&RunConfig::zeeman_uncertainty, "Zeeman row uncertainty")},
        {"systematics.intensity_gradient_fraction",
         real(&RunConfig::intensity_gradient_fraction, "arm-to-arm intensity difference at the pi pulse")},
        {"systematics.pulse_imbalance_fraction",
         real(&RunConfig::pulse_imbalance_fraction, "intensity difference between pulses 1 and 3")},
        {"systematics.detuning_error_Hz", real(&RunConfig::detuning_error, "laser frequency error")},
        {"campaign.hours", real(&RunConfig::hours, "campaign length")},
        {"campaign.bin_width_s", real(&RunConfig::bin_width, "analysis bin width")},
        {"campaign.k_tilde", real(&RunConfig::k_tilde, "injected spin-gravity coupling")},
        {"fringe.points_per_period", integer(&RunConfig::points_per_period, "chirp steps per fringe period")},
        {"fringe.periods", integer(&RunConfig::periods, "fringe periods per scan")},
        {"run.seed",
         {"random seed",
          [](RunConfig& cfg, const std::string& key, const std::string& v) {
              const long long s = parse_int(key, v);
              if (s < 0) {
                  throw ConfigError("run.seed must be non-negative");
              }
              cfg.seed = static_cast<std::uint64_t>(s);
          },
          [](const RunConfig& cfg) { return std::to_string(cfg.seed); }}},
        {"run.output_dir", text(&RunConfig::output_dir, "directory for output files")},
    };
    return table;
}

} // namespace

void RunConfig::set(const std::string& key, const std::string& value)
{
    const auto& table = bindings();
    const auto it = table.find(key);
    if (it == table.end()) {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
    it->second.set(*this, key, trim(value));
}

std::string RunConfig::get(const std::string& key) const
{
    const auto& table = bindings();
    const auto it = table.find(key);
    if (it == table.end()) {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
    return it->second.get(*this);
}

void RunConfig::load(std::istream& in, const std::string& source)
{
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key = value");
        }
        try {
            set(trim(body.substr(0, eq)), body.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void RunConfig::load_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    load(in, path.string());
}

void RunConfig::apply_override(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override '" + assignment + "' is not key=value");
    }
    set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

std::string RunConfig::dump() const
{
    std::ostringstream out;
    for (const auto& [key, binding] : bindings()) {
        out << key << " = " << binding.get(*this) << '\n';
    }
    return out.str();
}

PhysicalConstants RunConfig::constants() const
{
    return rb87_constants(g_nominal);
}

InterferometerConfig RunConfig::interferometer(const PhysicalConstants& c) const
{
    InterferometerConfig cfg = default_interferometer(c);
    cfg.pulse_separation = pulse_separation;
    cfg.bragg_order = bragg_order;
    cfg.pi_pulse_fwhm = pi_pulse_fwhm;
    cfg.momentum_width = momentum_width;
    cfg.fountain_height = fountain_height;
    cfg.launch_velocity = launch_velocity > 0.0 ? launch_velocity : std::sqrt(2.0 * c.g_nominal * fountain_height);
    cfg.cycle_time = cycle_time;
    cfg.alternation_lag = alternation_lag;
    cfg.contrast = contrast;
    cfg.offset = offset;
    cfg.ladder_half_width = ladder_half_width;
    cfg.validate();
    return cfg;
}

LaserField RunConfig::laser_template() const
{
    LaserField f = make_laser_field(total_power, beam_diameter, detuning, intensity_ratio);
    return f;
}

void RunConfig::validate() const
{
    auto require = [](bool ok, const std::string& what) {
        if (!ok) {
            throw ConfigError(what);
        }
    };
    require(g_nominal > 0.0, "constants.g_nominal_m_s2 must be positive");
    require(momentum_samples >= 100, "interferometer.momentum_samples must be >= 100");
    require(total_power > 0.0 && beam_diameter > 0.0, "laser power and beam diameter must be positive");
    require(intensity_ratio > 0.0, "laser.intensity_ratio must be positive");
    require(bracket_high > bracket_low, "laser bracket must satisfy low < high");
    require(sensitivity >= 0.0 && detection_sigma >= 0.0 && vibration_common >= 0.0,
            "noise amplitudes must be non-negative");
    require(raman_linewidth_hz > 0.0, "detection.raman_linewidth_Hz must be positive");
    require(bias_current >= 0.0, "systematics.bias_current_A must be non-negative");
    require(zeeman_uncertainty >= 0.0, "systematics.zeeman_uncertainty_g must be non-negative");
    require(intensity_gradient_fraction >= 0.0 && intensity_gradient_fraction <= 1.0
                && pulse_imbalance_fraction >= 0.0 && pulse_imbalance_fraction <= 1.0,
            "intensity fractions must lie in [0, 1]");
    require(hours > 0.0, "campaign.hours must be positive");
    require(bin_width > 0.0, "campaign.bin_width_s must be positive");
    require(points_per_period >= 1 && periods >= 1, "fringe scan needs >= 1 point per period and >= 1 period");
    try {
        interferometer(constants());
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

std::vector<ConfigKeyInfo> config_keys()
{
    const RunConfig defaults;
    std::vector<ConfigKeyInfo> out;
    for (const auto& [key, binding] : bindings()) {
        out.push_back({key, binding.get(defaults), binding.description});
    }
    return out;
}

} // namespace uff
