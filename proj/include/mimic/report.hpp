#pragma once

#include <string>
#include <vector>

#include "mimic/metrics.hpp"
#include "mimic/trainer.hpp"

namespace mimic {

// epoch,train_loss,test_loss,test_mse
std::string loss_history_csv(const std::vector<EpochStats>& history);

// One row per evaluated sample.
struct SampleReport {
    std::uint64_t index = 0;
    double servo_mae = 0.0;
    double servo_mse = 0.0;
    double landmark_dist = -1.0;   // negative when not computed
    double image_sim = -1.0;
    double pixel_dist = -1.0;
};

// index,servo_mae,servo_mse,landmark_distance,image_similarity,pixel_distance
std::string per_sample_csv(const std::vector<SampleReport>& rows);

// Single-row summary with fixed columns:
// samples,mean_servo_mae,mean_servo_mse,mean_landmark_distance,
// mean_image_similarity,mean_pixel_distance,gs,gt,gd
struct SummaryReport {
    std::size_t samples = 0;
    double mean_servo_mae = 0.0;
    double mean_servo_mse = 0.0;
    double mean_landmark_dist = 0.0;
    double mean_image_sim = 0.0;
    double mean_pixel_dist = 0.0;
    double gs = 0.0;
    double gt = 0.0;
    double gd = 0.0;
};

std::string summary_csv(const SummaryReport& s);

// threshold,<one fraction column per labeled curve>
std::string ced_csv(const std::vector<std::pair<std::string, CedCurve>>& curves);

// Self-contained SVG line plot of one or more CED curves.
std::string ced_svg(const std::vector<std::pair<std::string, CedCurve>>& curves);

}  // namespace mimic
