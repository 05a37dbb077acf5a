#pragma once

#include "uff/bragg.hpp"
#include "uff/constants.hpp"
#include "uff/interferometer.hpp"
#include "uff/model.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace uff {

/// Every tunable of a run, addressed by flat namespaced keys such as
/// "interferometer.T_s". Text values "auto" mean "derive from other keys".
struct RunConfig {
    // interferometer
    double pulse_separation = 0.150;
    int bragg_order = 1;
    double pi_pulse_fwhm = 42e-6;
    double momentum_width = 0.37;
    int momentum_samples = 500;
    double fountain_height = 0.66;
    double launch_velocity = 0.0;     // 0 = auto
    double cycle_time = 1.0;
    double alternation_lag = 2.0;
    double contrast = 0.5;
    double offset = 0.5;
    int ladder_half_width = 5;
    // constants
    double g_nominal = 9.794;
    // laser
    double total_power = 0.080;
    double beam_diameter = 0.019;
    double intensity_ratio = 1.0;
    double detuning = 0.0;            // Hz, 0 = auto (balanced)
    double bracket_low = balanced_bracket_low;
    double bracket_high = balanced_bracket_high;
    // noise
    bool noise_enabled = true;
    double sensitivity = 1.2e-7;      // g at 1 s, differential
    double detection_sigma = 0.01;
    double vibration_common = 0.2;    // rad
    double raman_linewidth_hz = 300.0;
    // systematics
    bool systematics_enabled = true;
    bool tides = true;
    bool zeeman = true;
    std::string profile_path;         // empty = built-in profile
    std::string tide_path;            // empty = built-in model
    double bias_current = 0.1;
    double zeeman_uncertainty = 0.5e-10;
    double intensity_gradient_fraction = 1e-6;
    double pulse_imbalance_fraction = 0.01;
    double detuning_error = 1e6;      // Hz
    // campaign
    double hours = 63.0;
    double bin_width = 400.0;
    double k_tilde = 0.0;
    // fringe
    int points_per_period = 20;
    int periods = 2;
    // run
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    /// Throws ConfigError for unknown keys or unparsable values.
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;

    /// Applies "key = value" lines; '#' starts a comment.
    void load(std::istream& in, const std::string& source = "config");
    void load_file(const std::filesystem::path& path);
    /// Applies a "key=value" override.
    void apply_override(const std::string& assignment);

    /// Every key with its current value, one "key = value" per line.
    std::string dump() const;

    PhysicalConstants constants() const;
    InterferometerConfig interferometer(const PhysicalConstants& c) const;
    LaserField laser_template() const;
    /// Throws ConfigError when values are out of range.
    void validate() const;
};

struct ConfigKeyInfo {
    std::string key;
    std::string default_value;
    std::string description;
};

/// All accepted keys with defaults and one-line descriptions.
std::vector<ConfigKeyInfo> config_keys();

} // namespace uff
