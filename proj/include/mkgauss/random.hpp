#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mkg {

/// SplitMix64 output finalizer.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/**
 * Derive the seed of sub-stream `index` from `seed`.
 *
 * child = splitmix64(seed ^ splitmix64(index)). Every Monte-Carlo fan-out in
 * the library goes through this function, so a (master seed, cell, replicate,
 * series) path always lands on the same 64-bit seed.
 */
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(seed ^ splitmix64(index));
}

/**
 * Standard normal draws from a seeded mt19937_64.
 *
 * std::normal_distribution is not specified bit-for-bit across standard
 * libraries, so the Box-Muller transform is applied to 53-bit uniforms taken
 * directly from the engine. Both Box-Muller outputs are used.
 */
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1], u2 in [0, 1)
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mkg
