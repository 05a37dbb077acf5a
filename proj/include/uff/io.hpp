#pragma once

#include "uff/bragg.hpp"
#include "uff/campaign.hpp"
#include "uff/detection.hpp"
#include "uff/interferometer.hpp"
#include "uff/systematics.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace uff {

/// Shortest text that reads back to the same double.
std::string format_double(double value);

/// Minimal CSV writer: one header line, then rows of doubles or strings.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& values);

private:
    std::ostream& out_;
    std::size_t columns_;
};

void write_shot_records(std::ostream& out, const std::vector<ShotRecord>& records);
std::vector<ShotRecord> read_shot_records(std::istream& in);

void write_fringe_points(std::ostream& out, const std::vector<FringePoint>& points);

/// Profile text format: '#' header lines carrying "nominal_current_A: x" and
/// "bias_scale_T_per_A: x", then whitespace-separated columns
/// z_m B_tesla [residual_tesla].
void write_magnetic_profile(std::ostream& out, const MagneticProfile& profile);
MagneticProfile read_magnetic_profile(std::istream& in);
MagneticProfile load_magnetic_profile(const std::filesystem::path& path);

/// Tide table: '#' comments, optional "site_offset_m_s2: x" header, then rows
/// name frequency_cycles_per_day amplitude_microgal phase_rad.
void write_tide_model(std::ostream& out, const TideModel& model);
TideModel read_tide_model(std::istream& in);
TideModel load_tide_model(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const PulseWaveform& w);
void from_json(const nlohmann::json& j, PulseWaveform& w);
void to_json(nlohmann::json& j, const MomentumLadderState& s);
void from_json(const nlohmann::json& j, MomentumLadderState& s);
void to_json(nlohmann::json& j, const Measured& m);
void to_json(nlohmann::json& j, const SystematicShift& s);
void to_json(nlohmann::json& j, const SystematicBudget& b);
void to_json(nlohmann::json& j, const FringeFit& f);

/// Budget laid out as a fixed-width table in units of 1e-10 g.
std::string format_budget_table(const SystematicBudget& budget);

} // namespace uff
