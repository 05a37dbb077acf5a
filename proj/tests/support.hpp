#pragma once

#include "uff/bragg.hpp"
#include "uff/constants.hpp"
#include "uff/model.hpp"
#include "uff/pipeline.hpp"

#include <filesystem>

namespace fixture {

inline const uff::PhysicalConstants& rb()
{
    static const uff::PhysicalConstants c = uff::rb87_constants();
    return c;
}

inline const uff::InterferometerConfig& config()
{
    static const uff::InterferometerConfig cfg = uff::default_interferometer(rb());
    return cfg;
}

// calibrated once; several suites need the same pulses
inline const uff::PulseCalibration& pulses()
{
    static const uff::PulseCalibration p = uff::calibrate_pulses(config(), rb());
    return p;
}

inline std::filesystem::path data_dir()
{
    return UFF_DATA_DIR;
}

inline std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("uff_tests_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace fixture
