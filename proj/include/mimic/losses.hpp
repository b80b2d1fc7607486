#pragma once

#include <utility>
#include <vector>

#include "mimic/servo_layout.hpp"

namespace mimic {

// Loss weighting and the symmetric channel pairs entering the eye-movement
// consistency term.
struct LossConfig {
    double lambda = 0.01;
    std::vector<std::pair<int, int>> eye_pairs;
    std::vector<std::pair<int, int>> brow_pairs;
};

// Pairs taken from the layout's eye-region sync rules and brow exclusion
// groups.
LossConfig make_loss_config(const ServoLayout& layout, double lambda = 0.01);

using FrameBatch = std::vector<ServoFrame>;

// Mean over the batch of ||y - yhat||^2 / 25 (per-servo normalization, so
// sqrt(loss) reads as an average servo error fraction).
double mse_loss(const FrameBatch& pred, const FrameBatch& target);
double mse_loss_grad(const FrameBatch& pred, const FrameBatch& target,
                     FrameBatch& grad_pred);

// Mean over the batch of (mean |l-r| over eye pairs) + (mean |l-r| over
// brow pairs). Subgradient convention: d|x|/dx = 0 at x = 0.
double consistency_loss(const FrameBatch& pred, const LossConfig& config);
double consistency_loss_grad(const FrameBatch& pred, const LossConfig& config,
                             FrameBatch& grad_pred);

// mse + lambda * consistency.
double total_loss(const FrameBatch& pred, const FrameBatch& target,
                  const LossConfig& config);
double total_loss_grad(const FrameBatch& pred, const FrameBatch& target,
                       const LossConfig& config, FrameBatch& grad_pred);

}  // namespace mimic
