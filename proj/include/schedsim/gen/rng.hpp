#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace schedsim::gen {

/// splitmix64 step; used to derive independent sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// One random quantity per stream, so that e.g. changing sigma redraws the
/// errors without perturbing the sizes of the same seed.
enum class Stream : std::uint64_t {
    Sizes = 1,
    Arrivals = 2,
    Errors = 3,
    Weights = 4,
};

/// @brief Seedable 64-bit generator (mt19937_64) with platform-independent
/// real-valued draws.
///
/// The standard distributions are implementation-defined, so uniform and
/// normal variates are mapped by hand: uniforms take the top 53 bits, and
/// normals come from a cached Box-Muller transform. Identical (seed,
/// stream) always yields the identical sequence.
class Rng {
public:
    Rng(std::uint64_t base_seed, Stream stream)
        : engine_(splitmix64(splitmix64(base_seed) ^
                             (static_cast<std::uint64_t>(stream) * 0x9E3779B97F4A7C15ULL))) {}

    /// Uniform draw in the open interval (0, 1).
    double uniform01() {
        const std::uint64_t bits = engine_() >> 11;             // 53 random bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;   // never 0 or 1
    }

    /// Standard normal draw (Box-Muller, pairs cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace schedsim::gen
