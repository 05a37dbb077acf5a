#include "uff/io.hpp"

#include "uff/errors.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace uff {

std::string format_double(double value)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size())
{
    row(header);
}

void CsvWriter::row(const std::vector<double>& values)
{
    std::vector<std::string> text;
    text.reserve(values.size());
    for (double v : values) {
        text.push_back(format_double(v));
    }
    row(text);
}

void CsvWriter::row(const std::vector<std::string>& values)
{
    if (values.size() != columns_) {
        throw DomainError("CSV row has " + std::to_string(values.size()) + " fields, header has "
                          + std::to_string(columns_));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        out_ << (i ? "," : "") << values[i];
    }
    out_ << '\n';
}

void write_shot_records(std::ostream& out, const std::vector<ShotRecord>& records)
{
    CsvWriter csv(out, {"timestamp_s", "state_F", "alpha_rad_s2", "probability"});
    for (const auto& r : records) {
        csv.row({format_double(r.timestamp), std::to_string(r.state_f), format_double(r.alpha),
                 format_double(r.probability)});
    }
}

std::vector<ShotRecord> read_shot_records(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw DomainError("shot record CSV is empty");
    }
    std::vector<ShotRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        ShotRecord r;
        char comma = 0;
        if (!(ss >> r.timestamp >> comma >> r.state_f >> comma >> r.alpha >> comma >> r.probability)) {
            throw DomainError("malformed shot record on line " + std::to_string(line_no));
        }
        out.push_back(r);
    }
    return out;
}

void write_fringe_points(std::ostream& out, const std::vector<FringePoint>& points)
{
    CsvWriter csv(out, {"timestamp_s", "state_F", "alpha_rad_s2", "probability"});
    for (const auto& p : points) {
        csv.row({format_double(p.timestamp), std::to_string(p.state_f), format_double(p.alpha),
                 format_double(p.probability)});
    }
}

namespace {

bool header_value(const std::string& line, const std::string& key, double& value)
{
    const auto pos = line.find(key + ":");
    if (pos == std::string::npos) {
        return false;
    }
    std::istringstream ss(line.substr(pos + key.size() + 1));
    if (!(ss >> value)) {
        throw DomainError("header '" + key + "' has no numeric value");
    }
    return true;
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    return in;
}

} // namespace

void write_magnetic_profile(std::ostream& out, const MagneticProfile& profile)
{
    out << "# nominal_current_A: " << format_double(profile.nominal_current()) << '\n';
    out << "# bias_scale_T_per_A: " << format_double(profile.bias_scale()) << '\n';
    out << "# z_m B_tesla residual_tesla\n";
    for (std::size_t i = 0; i < profile.z().size(); ++i) {
        out << format_double(profile.z()[i]) << ' ' << format_double(profile.field_samples()[i]) << ' '
            << format_double(profile.residual_samples()[i]) << '\n';
    }
}

MagneticProfile read_magnetic_profile(std::istream& in)
{
    double current = 0.0;
    double scale = 0.0;
    bool have_current = false;
    bool have_scale = false;
    std::vector<double> z, b, r;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            have_current = header_value(line, "nominal_current_A", current) || have_current;
            have_scale = header_value(line, "bias_scale_T_per_A", scale) || have_scale;
            continue;
        }
        std::istringstream ss(line);
        std::vector<double> fields;
        double v = 0.0;
        while (ss >> v) {
            fields.push_back(v);
        }
        if (!ss.eof() || fields.size() < 2 || fields.size() > 3) {
            throw DomainError("malformed profile row on line " + std::to_string(line_no));
        }
        if (columns == 0) {
            columns = fields.size();
        } else if (fields.size() != columns) {
            throw DomainError("inconsistent column count on line " + std::to_string(line_no));
        }
        z.push_back(fields[0]);
        b.push_back(fields[1]);
        r.push_back(fields.size() == 3 ? fields[2] : 0.0);
    }
    if (!have_current || !have_scale) {
        throw DomainError("profile header must give nominal_current_A and bias_scale_T_per_A");
    }
    return MagneticProfile(std::move(z), std::move(b), std::move(r), current, scale);
}

MagneticProfile load_magnetic_profile(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return read_magnetic_profile(in);
}

void write_tide_model(std::ostream& out, const TideModel& model)
{
    out << "# site_offset_m_s2: " << format_double(model.site_offset) << '\n';
    out << "# name frequency_cycles_per_day amplitude_microgal phase_rad\n";
    for (const auto& k : model.constituents) {
        out << k.name << ' ' << format_double(k.omega * 86400.0 / two_pi) << ' ' << format_double(k.amplitude / 1e-8)
            << ' ' << format_double(k.phase) << '\n';
    }
}

TideModel read_tide_model(std::istream& in)
{
    TideModel model;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            header_value(line, "site_offset_m_s2", model.site_offset);
            continue;
        }
        std::istringstream ss(line);
        TideConstituent k;
        double cpd = 0.0;
        double ugal = 0.0;
        if (!(ss >> k.name >> cpd >> ugal >> k.phase)) {
            throw DomainError("malformed tide row on line " + std::to_string(line_no));
        }
        k.omega = cpd * two_pi / 86400.0;
        k.amplitude = ugal * 1e-8;
        model.constituents.push_back(k);
    }
    model.validate();
    return model;
}

TideModel load_tide_model(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return read_tide_model(in);
}

void to_json(nlohmann::json& j, const PulseWaveform& w)
{
    j = {{"sigma_s", w.sigma}, {"peak_rabi_rad_s", w.peak_rabi}, {"truncation_sigma", w.truncation}};
}

void from_json(const nlohmann::json& j, PulseWaveform& w)
{
    w.sigma = j.at("sigma_s").get<double>();
    w.peak_rabi = j.at("peak_rabi_rad_s").get<double>();
    w.truncation = j.at("truncation_sigma").get<double>();
    w.validate();
}

void to_json(nlohmann::json& j, const MomentumLadderState& s)
{
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (const auto& a : s.amplitudes) {
        re.push_back(a.real());
        im.push_back(a.imag());
    }
    j = {{"max_order", s.max_order}, {"reference_momentum", s.reference_momentum}, {"real", re}, {"imag", im}};
}

void from_json(const nlohmann::json& j, MomentumLadderState& s)
{
    s.max_order = j.at("max_order").get<int>();
    s.reference_momentum = j.at("reference_momentum").get<double>();
    const auto re = j.at("real").get<std::vector<double>>();
    const auto im = j.at("imag").get<std::vector<double>>();
    if (re.size() != im.size() || re.size() != static_cast<std::size_t>(2 * s.max_order + 1)) {
        throw DomainError("ladder state arrays do not match max_order");
    }
    s.amplitudes.resize(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        s.amplitudes[i] = {re[i], im[i]};
    }
}

void to_json(nlohmann::json& j, const Measured& m)
{
    j = {{"value", m.value}, {"uncertainty", m.uncertainty}};
}

void to_json(nlohmann::json& j, const SystematicShift& s)
{
    j = {{"channel", channel_name(s.channel)}, {"value", s.value}, {"uncertainty", s.uncertainty}, {"note", s.note}};
}

void to_json(nlohmann::json& j, const SystematicBudget& b)
{
    j = {{"rows", b.rows}, {"corrected_value", b.corrected_value}, {"corrected_uncertainty", b.corrected_uncertainty}};
}

void to_json(nlohmann::json& j, const FringeFit& f)
{
    j = {{"offset", f.offset},
         {"contrast", f.contrast},
         {"phase_rad", f.phase},
         {"alpha_ref_rad_s2", f.alpha_ref},
         {"offset_sigma", std::sqrt(f.covariance[0][0])},
         {"contrast_sigma", f.contrast_sigma()},
         {"phase_sigma_rad", f.phase_sigma()},
         {"residual_rms", f.residual_rms},
         {"points", f.points}};
}

std::string format_budget_table(const SystematicBudget& budget)
{
    std::ostringstream out;
    out << std::left << std::setw(28) << "Contribution" << std::right << std::setw(12) << "Value" << std::setw(14)
        << "Uncertainty" << "   (1e-10 g)\n";
    out << std::fixed << std::setprecision(2);
    for (const auto& row : budget.rows) {
        out << std::left << std::setw(28) << channel_name(row.channel) << std::right << std::setw(12)
            << row.value * 1e10 << std::setw(14) << row.uncertainty * 1e10 << '\n';
    }
    out << std::left << std::setw(28) << "Corrected" << std::right << std::setw(12) << budget.corrected_value * 1e10
        << std::setw(14) << budget.corrected_uncertainty * 1e10 << '\n';
    return out.str();
}

} // namespace uff
