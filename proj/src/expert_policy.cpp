#include "mimic/expert_policy.hpp"

#include <algorithm>
#include <cmath>

#include "mimic/rng.hpp"

namespace mimic {

namespace {

// Draw one magnitude inside the intersection of the region's magnitude
// range and the channel's limit interval.
double draw_magnitude(SplitMix64& rng, const PolicyConfig& cfg, const ServoLayout& lay,
                      int channel) {
    const auto& c = lay.channels[channel];
    auto it = cfg.magnitude_range.find(c.region);
    double lo = c.lo, hi = c.hi;
    if (it != cfg.magnitude_range.end()) {
        lo = std::max(lo, it->second.first);
        hi = std::min(hi, it->second.second);
    }
    if (lo >= hi) return c.lo;
    return rng.uniform(lo, hi);
}

// Mode pick for a mutually-exclusive group: "rest" with probability 0.25,
// the remaining mass split evenly over the n active modes.
int pick_mode(SplitMix64& rng, int n_modes) {
    double u = rng.next_double();
    if (u < 0.25) return -1;  // rest
    return static_cast<int>((u - 0.25) / 0.75 * n_modes) % n_modes;
}

}  // namespace

void PolicyConfig::validate(const ServoLayout& layout) const {
    for (const auto& [region, range] : magnitude_range) {
        (void)region;
        if (!(range.first >= 0.0 && range.second <= 1.0 && range.first <= range.second))
            throw ArgumentError("magnitude range must be a sub-interval of [0,1]");
    }
    if (trajectory_peak_frames < 1)
        throw ArgumentError("trajectory_peak_frames must be >= 1");
    layout.validate();
}

ServoFrame sample_expression(const PolicyConfig& config, std::uint64_t index,
                             const ServoLayout& layout) {
    using namespace servo;
    SplitMix64 rng(derive_seed(config.base_seed, index));
    ServoFrame f(kNumServos, 0.0);

    // Rules 1-4: synchronized eye-region pairs share one drawn value.
    const std::pair<int, int> sync_pairs[4] = {
        {kEyeHorizL, kEyeHorizR}, {kEyeVertL, kEyeVertR},
        {kBlinkL, kBlinkR},       {kEyeOpenL, kEyeOpenR}};
    for (const auto& [l, r] : sync_pairs) {
        double v = draw_magnitude(rng, config, layout, l);
        f[l] = f[r] = v;
    }

    // Rule 5: at most one brow movement.
    int brow = pick_mode(rng, 2);
    if (brow == 0) {
        double v = draw_magnitude(rng, config, layout, kBrowRaiseL);
        f[kBrowRaiseL] = f[kBrowRaiseR] = v;
    } else if (brow == 1) {
        double v = draw_magnitude(rng, config, layout, kBrowFrownL);
        f[kBrowFrownL] = f[kBrowFrownR] = v;
    }

    // Rule 6: head moved freely within its limits.
    f[kHeadYaw] = rng.uniform(layout.channels[kHeadYaw].lo, layout.channels[kHeadYaw].hi);

    // Rule 7: one mouth action; smile/sad pairs synchronized, corner-up
    // channels drawn independently.
    int mouth = pick_mode(rng, 3);
    if (mouth == 0) {
        double v = draw_magnitude(rng, config, layout, kSmileL);
        f[kSmileL] = f[kSmileR] = v;
    } else if (mouth == 1) {
        double v = draw_magnitude(rng, config, layout, kSadL);
        f[kSadL] = f[kSadR] = v;
    } else if (mouth == 2) {
        f[kCornerUpL] = draw_magnitude(rng, config, layout, kCornerUpL);
        f[kCornerUpR] = draw_magnitude(rng, config, layout, kCornerUpR);
    }

    // Unconstrained mouth plumbing: lips independent, jaw pair coupled.
    f[kUpperLipL] = draw_magnitude(rng, config, layout, kUpperLipL);
    f[kUpperLipR] = draw_magnitude(rng, config, layout, kUpperLipR);
    f[kLowerLipL] = draw_magnitude(rng, config, layout, kLowerLipL);
    f[kLowerLipR] = draw_magnitude(rng, config, layout, kLowerLipR);
    double jaw = draw_magnitude(rng, config, layout, kJawL);
    f[kJawL] = f[kJawR] = jaw;

    return f;
}

std::uint64_t trajectory_peak_seed(std::uint64_t base_seed, std::uint64_t index) {
    return derive_seed(derive_seed(base_seed, index), seed_tag::kTrajectory);
}

namespace {

// Eased per-step velocity weights for a ramp of `steps` frames: the first
// and last step move at half speed, so frame-to-frame deltas never grow by
// more than half a full step and the hop detector stays quiet at the
// corners of the neutral-peak-neutral profile.
std::vector<double> eased_weights(int steps) {
    std::vector<double> w(steps);
    for (int i = 0; i < steps; ++i)
        w[i] = std::min({i + 1, steps - i, 2}) / 2.0;
    return w;
}

}  // namespace

Trajectory sample_trajectory(const PolicyConfig& config, std::uint64_t index, int length,
                             const ServoLayout& layout) {
    if (length < 3) throw ArgumentError("trajectory length must be >= 3");

    PolicyConfig peak_cfg = config;
    peak_cfg.base_seed = trajectory_peak_seed(config.base_seed, index);
    ServoFrame peak = sample_expression(peak_cfg, 0, layout);

    double max_peak = 0.0;
    for (double v : peak) max_peak = std::max(max_peak, std::abs(v));

    // Frame plan: rise over r steps, hold h frames at the peak, fall over
    // the remaining steps. The peak is scaled down only when the window is
    // too short to reach it under the ramp bound.
    const int hold = std::clamp(config.trajectory_peak_frames, 1, length - 2);
    const int rise = (length - hold) / 2;
    const int fall = length - rise - hold;

    const std::vector<double> wr = eased_weights(rise);
    const std::vector<double> wf = eased_weights(fall);
    double sr = 0.0, sf = 0.0, wr_max = 0.0, wf_max = 0.0;
    for (double w : wr) {
        sr += w;
        wr_max = std::max(wr_max, w);
    }
    for (double w : wf) {
        sf += w;
        wf_max = std::max(wf_max, w);
    }

    double scale = 1.0;
    if (max_peak > 0.0) {
        const double step_r = max_peak * wr_max / sr;
        const double step_f = max_peak * wf_max / sf;
        scale = std::min(1.0, kTrajectoryRampBound / std::max(step_r, step_f));
    }

    std::vector<double> alpha(length, scale);
    double cum = 0.0;
    alpha[0] = 0.0;
    for (int k = 1; k <= rise; ++k) {
        cum += wr[k - 1];
        alpha[k] = scale * (cum / sr);  // == scale exactly at k == rise
    }
    cum = 0.0;
    for (int j = 1; j <= fall; ++j) {
        cum += wf[j - 1];
        alpha[rise + hold - 1 + j] = scale * (1.0 - cum / sf);
    }

    Trajectory traj;
    traj.rate_hz = kFrameRateHz;
    traj.frames.reserve(length);
    for (int k = 0; k < length; ++k) {
        ServoFrame frame(kNumServos);
        for (int c = 0; c < kNumServos; ++c) frame[c] = alpha[k] * peak[c];
        traj.frames.push_back(std::move(frame));
    }
    traj.validate();
    return traj;
}

}  // namespace mimic
