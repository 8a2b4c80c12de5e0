#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace salsa {

// Algorithm identifier written into dataset metadata so outputs can be
// reproduced bit for bit by any implementation of the same scheme.
inline constexpr const char* kRngAlgorithm = "splitmix64-boxmuller-v1";

// splitmix64 (Steele/Lea/Vigna): 64-bit state, one multiply-xorshift chain
// per draw. Chosen over std engines because its output stream is fully
// specified, so datasets reproduce across standard libraries.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // [0, 1) with 53 random mantissa bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; uses the cosine branch only, one draw per call.
    double normal() {
        const double u1 = (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;  // (0,1)
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    // Unbiased-enough integer draw for shuffles (128-bit multiply-shift).
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

  private:
    std::uint64_t state_;
};

// Counter-based substream: rows of a dataset draw from independent streams
// keyed by (seed, index), so row generation order cannot matter.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    return SplitMix64(mixer.next());
}

// Seed-deterministic permutation of {0,...,n-1} (Fisher-Yates).
inline std::vector<long> shuffled_indices(long n, std::uint64_t seed) {
    std::vector<long> idx(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    SplitMix64 rng = substream(seed, 0);
    for (long i = n - 1; i > 0; --i) {
        const long j = static_cast<long>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    }
    return idx;
}

}  // namespace salsa
