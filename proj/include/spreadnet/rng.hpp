#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace spreadnet {

/// Deterministic 64-bit generator (splitmix64). Used everywhere randomness
/// is needed so that results are reproducible bit-for-bit across platforms;
/// std::* distributions are implementation-defined and would not be.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Integer in [0, n). Modulo bias is negligible for the n used here.
    std::uint64_t bounded(std::uint64_t n) { return next() % n; }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (both uniforms drawn fresh each call).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

/// Derive an independent stream seed from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x632be59bd9b4e019ULL + index * 0x9e3779b97f4a7c15ULL));
    return g.next();
}

} // namespace spreadnet
