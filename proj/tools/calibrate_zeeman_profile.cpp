// Fits the solenoid gradient of the synthetic default profile so the
// differential Zeeman bias at the nominal current hits a target, then writes
// the sampled profile and the default tide table.

#include "uff/io.hpp"
#include "uff/systematics.hpp"

#include "CLI11.hpp"

#include <boost/math/tools/roots.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Calibrate the default magnetic profile"};
    double target = -2.1e-10;
    std::string profile_out = "data/magnetic_profile_default.txt";
    std::string tide_out = "data/tide_model_default.txt";
    app.add_option("--target", target, "differential bias to reproduce, units of g");
    app.add_option("--profile-out", profile_out, "where to write the sampled profile");
    app.add_option("--tide-out", tide_out, "where to write the tide table");
    CLI11_PARSE(app, argc, argv);

    const auto c = uff::rb87_constants();
    const auto config = uff::default_interferometer(c);
    const auto traj = uff::make_trajectory(config, c);
    auto bias_for = [&](double gradient) {
        auto shape = uff::default_profile_shape();
        shape.solenoid_gradient = gradient;
        return uff::zeeman_differential_bias(uff::synthetic_profile(shape), traj, config, c) - target;
    };
    boost::uintmax_t iterations = 100;
    const auto [lo, hi] = boost::math::tools::toms748_solve(bias_for, 0.0, 0.05,
                                                             boost::math::tools::eps_tolerance<double>(40), iterations);
    const double gradient = 0.5 * (lo + hi);

    auto shape = uff::default_profile_shape();
    shape.solenoid_gradient = gradient;
    const auto profile = uff::synthetic_profile(shape);
    const auto curve = uff::zeeman_modulation_curve(profile, {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3}, config, c);

    std::printf("solenoid_gradient %.6g\n", gradient);
    std::printf("differential bias %.6g g\n", bias_for(gradient) + target);
    std::printf("frozen default gives %.6g g\n",
                uff::zeeman_differential_bias(uff::default_magnetic_profile(), traj, config, c));
    std::printf("quadratic/linear at 0.3 A %.3g\n", std::abs(curve.c2 * 0.09 / (curve.c1 * 0.3)));

    std::ofstream pout(profile_out);
    uff::write_magnetic_profile(pout, uff::default_magnetic_profile());
    std::ofstream tout(tide_out);
    uff::write_tide_model(tout, uff::default_tide_model());
    if (!pout || !tout) {
        std::cerr << "failed to write output files\n";
        return 2;
    }
    return 0;
}
