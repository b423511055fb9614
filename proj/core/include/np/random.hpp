#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace np {

// Seeded, stream-addressable PRNG for reproducible Monte Carlo runs.
//
// A stream is identified by (seed, stream_id). The same pair reproduces the
// same draw sequence bit-exactly on any platform; distinct stream ids give
// statistically independent sequences. State is xoshiro256**, seeded through
// SplitMix64 so that nearby (seed, stream_id) pairs land far apart.
//
// Gaussians come from an explicit Box-Muller transform instead of
// std::normal_distribution, whose output differs across standard libraries.
class RandomStream {
public:
    RandomStream() : RandomStream(0, 0) {}

    RandomStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id) {
        std::uint64_t x = splitmix(seed ^ (splitmix(stream_id) + 0x9E3779B97F4A7C15ULL));
        for (auto& word : state_) {
            x += 0x9E3779B97F4A7C15ULL;
            word = splitmix(x);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5ULL, 7) * 9ULL;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard Gaussian draw (Box-Muller; the paired value is cached).
    double gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * kPi * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    std::uint64_t uniform_index(std::uint64_t n) {
        // unbiased rejection sampling
        const std::uint64_t threshold = (0 - n) % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x < threshold);
        return x % n;
    }

private:
    static constexpr double kPi = 3.141592653589793238462643383279502884;

    static std::uint64_t splitmix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::array<std::uint64_t, 4> state_{};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Derives a child seed for run r of a repetition grid, so that every run
// owns an independent family of streams.
inline std::uint64_t derive_run_seed(std::uint64_t base_seed, std::uint64_t run_index) {
    std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (run_index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Fixed stream-id layout: one stream per (run, purpose).
namespace stream_id {
constexpr std::uint64_t kInit = 0;        // initial iterate draw
constexpr std::uint64_t kComparison = 1;  // portfolio selection resamplings
constexpr std::uint64_t kSolverBase = 100;  // solver i uses kSolverBase + i
}  // namespace stream_id

}  // namespace np
