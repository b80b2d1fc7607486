#pragma once

#include <cmath>
#include <cstdint>

namespace mimic {

// Deterministic, platform-independent random numbers. Everything seeded in
// this project goes through SplitMix64 so that datasets, checkpoints and
// reports are bit-reproducible across runs and toolchains. std::* engines
// and distributions are deliberately not used anywhere on seeded paths.

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_scramble(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// The (index+1)-th output of a SplitMix64 stream started at `base`.
// This is the record-seed mixer: record i of a dataset, trajectory i of a
// policy, and every other per-index stream derives its seed this way, so
// any record is reproducible without generating its predecessors.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64_scramble(base + (index + 1) * kSplitMixGamma);
}

// Domain tags keep independent sub-streams (noise, shuffling, init, ...)
// from colliding when they share a base seed.
namespace seed_tag {
inline constexpr std::uint64_t kNoise = 0x6e6f697365ull;        // "noise"
inline constexpr std::uint64_t kTrajectory = 0x7472616aull;     // "traj"
inline constexpr std::uint64_t kInit = 0x696e6974ull;           // "init"
inline constexpr std::uint64_t kShuffle = 0x7368756666ull;      // "shuff"
inline constexpr std::uint64_t kLandmarkNoise = 0x6c6d6eull;    // "lmn"
inline constexpr std::uint64_t kSplit = 0x73706c6974ull;        // "split"
}  // namespace seed_tag

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += kSplitMixGamma;
        return splitmix64_scramble(state_);
    }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Uniform integer in [0, n), n > 0. Modulo bias is irrelevant at the
    // n values used here (shuffles, mode picks) but kept tiny anyway.
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    // One Box-Muller draw. The sine partner is discarded; consumption is
    // exactly two uniforms per call, which keeps streams easy to reason about.
    double gaussian() {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace mimic
