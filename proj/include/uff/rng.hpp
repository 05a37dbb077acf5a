#pragma once

#include <cstdint>
#include <random>

namespace uff {

/// Independent random stream addressed by (seed, stream, substream). Any two
/// distinct addresses give unrelated sequences, so shots can be simulated in
/// any order and still reproduce bit for bit.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                          static_cast<std::uint32_t>(substream), static_cast<std::uint32_t>(substream >> 32)};
        engine_.seed(seq);
    }

    double normal() { return normal_(engine_); }
    double normal(double sigma) { return sigma == 0.0 ? 0.0 : sigma * normal_(engine_); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace uff
