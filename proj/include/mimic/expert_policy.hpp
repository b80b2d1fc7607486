#pragma once

#include <cstdint>
#include <map>

#include "mimic/servo_layout.hpp"
#include "mimic/trajectory.hpp"

namespace mimic {

// Seeded sampler of constraint-valid expression frames. All seven rule
// groups are always enforced; the randomness lies in which mode of each
// mutually-exclusive group is active and in the drawn magnitudes.
struct PolicyConfig {
    std::uint64_t base_seed = 1;
    // Magnitude range per region, a sub-interval of [0,1]. Draws are further
    // intersected with each channel's limit interval.
    std::map<Region, std::pair<double, double>> magnitude_range = {
        {Region::Eye, {0.0, 1.0}},
        {Region::Eyelid, {0.0, 0.7}},
        {Region::Brow, {0.15, 0.85}},
        {Region::Head, {0.0, 1.0}},
        {Region::Mouth, {0.15, 0.85}},
    };
    int trajectory_peak_frames = 2;  // frames held at the peak expression

    void validate(const ServoLayout& layout) const;
};

// Max per-frame channel delta for generated trajectories (normalized units
// at 30 fps); keeps them hop-free under the default smoothness detector.
inline constexpr double kTrajectoryRampBound = 0.08;

// Deterministic function of (config.base_seed, index); the result always
// satisfies check_constraints(frame, layout, 1e-6) == [].
ServoFrame sample_expression(const PolicyConfig& config, std::uint64_t index,
                             const ServoLayout& layout);

// Seed of the peak expression of trajectory `index`; exposed so the peak
// can be reproduced with sample_expression directly.
std::uint64_t trajectory_peak_seed(std::uint64_t base_seed, std::uint64_t index);

// Neutral -> peak -> neutral servo trajectory with per-frame channel deltas
// bounded by kTrajectoryRampBound. length >= 3.
Trajectory sample_trajectory(const PolicyConfig& config, std::uint64_t index, int length,
                             const ServoLayout& layout);

}  // namespace mimic
