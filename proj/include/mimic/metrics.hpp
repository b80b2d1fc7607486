#pragma once

#include <vector>

#include "mimic/face_sim.hpp"
#include "mimic/image.hpp"
#include "mimic/trajectory.hpp"

namespace mimic {

// Cumulative error distribution over a fixed threshold grid.
struct CedCurve {
    std::vector<double> thresholds;
    std::vector<double> fractions;  // fraction of samples with error <= t
};

inline constexpr int kCedGridSize = 200;

// Fraction of samples with error <= t.
double ced_fraction(const std::vector<double>& errors, double t);

// 200 uniform thresholds from 0 to the max error.
CedCurve ced_curve(const std::vector<double>& errors);

// Same curve evaluated on a caller-supplied grid (for paired comparisons).
CedCurve ced_curve_on_grid(const std::vector<double>& errors,
                           const std::vector<double>& grid);

// Global per-channel similarity statistic with C1 = 0.01, C2 = 0.03 on
// pixel values normalized to [0,1], averaged over the three channels.
// Symmetric; exactly 1 on identical images.
double image_distance(const Image& x, const Image& y);

// Mean absolute pixel difference on the [0,1] scale; reported alongside the
// similarity statistic.
double pixel_distance(const Image& x, const Image& y);

// Mean Euclidean error over the 63 landmark pairs.
double landmark_distance(const Landmarks& a, const Landmarks& b);

struct SeqParams {
    double b_s = 0.01;   // space-similarity bandwidth
    double b_t = 0.01;   // time-similarity bandwidth
    double t_d = 0.05;   // hop threshold in normalized servo units
};

using LandmarkTrajectory = std::vector<Landmarks>;

// Gs: displacement profiles (relative to each trajectory's own first frame)
// compared pointwise through exp(-x^2/b).
double space_similarity(const LandmarkTrajectory& human, const LandmarkTrajectory& robot,
                        const SeqParams& p);

// Gt: same comparison over per-frame displacement increments.
double time_similarity(const LandmarkTrajectory& human, const LandmarkTrajectory& robot,
                       const SeqParams& p);

// Gd: 1 - hop fraction, a hop being a frame whose per-channel delta grows by
// more than t_d over the previous delta. Trajectory frames must be servo
// frames; needs at least 3 frames.
double movement_smoothness(const Trajectory& servo_traj, const SeqParams& p);

}  // namespace mimic
