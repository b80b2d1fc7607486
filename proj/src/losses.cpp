#include "mimic/losses.hpp"

#include <cmath>

#include "mimic/errors.hpp"

namespace mimic {

LossConfig make_loss_config(const ServoLayout& layout, double lambda) {
    if (lambda < 0.0) throw ArgumentError("lambda must be >= 0");
    LossConfig cfg;
    cfg.lambda = lambda;
    for (const auto& rule : layout.rules) {
        if (rule.kind == RuleKind::Sync) {
            for (const auto& pr : rule.pairs) {
                const Region reg = layout.channels[pr.first].region;
                if (reg == Region::Eye || reg == Region::Eyelid)
                    cfg.eye_pairs.push_back(pr);
            }
        } else if (rule.kind == RuleKind::Exclusion) {
            for (const auto& g : rule.groups) {
                if (g.size() == 2 && layout.channels[g[0]].region == Region::Brow)
                    cfg.brow_pairs.emplace_back(g[0], g[1]);
            }
        }
    }
    for (const auto& [l, r] : cfg.eye_pairs)
        if (l < 0 || l >= kNumServos || r < 0 || r >= kNumServos)
            throw ArgumentError("loss config pair out of range");
    return cfg;
}

namespace {

void check_batch(const FrameBatch& pred, const FrameBatch& target) {
    if (pred.size() != target.size())
        throw DimensionError("loss: batch sizes differ");
    if (pred.empty()) throw ArgumentError("loss: empty batch");
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i].size() != static_cast<std::size_t>(kNumServos) ||
            target[i].size() != static_cast<std::size_t>(kNumServos))
            throw DimensionError("loss: frame " + std::to_string(i) +
                                 " is not 25-dimensional");
}

inline double sgn0(double x) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;  // kink convention
}

}  // namespace

double mse_loss(const FrameBatch& pred, const FrameBatch& target) {
    check_batch(pred, target);
    double total = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double sq = 0.0;
        for (int c = 0; c < kNumServos; ++c) {
            const double d = pred[i][c] - target[i][c];
            sq += d * d;
        }
        total += sq / kNumServos;
    }
    return total / static_cast<double>(pred.size());
}

double mse_loss_grad(const FrameBatch& pred, const FrameBatch& target,
                     FrameBatch& grad_pred) {
    check_batch(pred, target);
    const double scale = 2.0 / (kNumServos * static_cast<double>(pred.size()));
    grad_pred.assign(pred.size(), ServoFrame(kNumServos, 0.0));
    double total = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double sq = 0.0;
        for (int c = 0; c < kNumServos; ++c) {
            const double d = pred[i][c] - target[i][c];
            sq += d * d;
            grad_pred[i][c] = scale * d;
        }
        total += sq / kNumServos;
    }
    return total / static_cast<double>(pred.size());
}

double consistency_loss(const FrameBatch& pred, const LossConfig& config) {
    if (pred.empty()) throw ArgumentError("consistency: empty batch");
    double total = 0.0;
    for (const auto& f : pred) {
        if (f.size() != static_cast<std::size_t>(kNumServos))
            throw DimensionError("consistency: frame is not 25-dimensional");
        double eye = 0.0, brow = 0.0;
        for (const auto& [l, r] : config.eye_pairs) eye += std::abs(f[l] - f[r]);
        for (const auto& [l, r] : config.brow_pairs) brow += std::abs(f[l] - f[r]);
        if (!config.eye_pairs.empty()) eye /= config.eye_pairs.size();
        if (!config.brow_pairs.empty()) brow /= config.brow_pairs.size();
        total += eye + brow;
    }
    return total / static_cast<double>(pred.size());
}

double consistency_loss_grad(const FrameBatch& pred, const LossConfig& config,
                             FrameBatch& grad_pred) {
    if (pred.empty()) throw ArgumentError("consistency: empty batch");
    grad_pred.assign(pred.size(), ServoFrame(kNumServos, 0.0));
    const double bscale = 1.0 / static_cast<double>(pred.size());
    const double we = config.eye_pairs.empty() ? 0.0 : 1.0 / config.eye_pairs.size();
    const double wb = config.brow_pairs.empty() ? 0.0 : 1.0 / config.brow_pairs.size();
    double total = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const auto& f = pred[i];
        if (f.size() != static_cast<std::size_t>(kNumServos))
            throw DimensionError("consistency: frame is not 25-dimensional");
        double eye = 0.0, brow = 0.0;
        for (const auto& [l, r] : config.eye_pairs) {
            const double d = f[l] - f[r];
            eye += std::abs(d);
            grad_pred[i][l] += bscale * we * sgn0(d);
            grad_pred[i][r] -= bscale * we * sgn0(d);
        }
        for (const auto& [l, r] : config.brow_pairs) {
            const double d = f[l] - f[r];
            brow += std::abs(d);
            grad_pred[i][l] += bscale * wb * sgn0(d);
            grad_pred[i][r] -= bscale * wb * sgn0(d);
        }
        total += eye * we + brow * wb;
    }
    return total * bscale;
}

double total_loss(const FrameBatch& pred, const FrameBatch& target,
                  const LossConfig& config) {
    const double mse = mse_loss(pred, target);
    if (config.lambda == 0.0) return mse;
    return mse + config.lambda * consistency_loss(pred, config);
}

double total_loss_grad(const FrameBatch& pred, const FrameBatch& target,
                       const LossConfig& config, FrameBatch& grad_pred) {
    FrameBatch mse_grad, con_grad;
    const double mse = mse_loss_grad(pred, target, mse_grad);
    if (config.lambda == 0.0) {
        grad_pred = std::move(mse_grad);
        return mse;
    }
    const double con = consistency_loss_grad(pred, config, con_grad);
    grad_pred = std::move(mse_grad);
    for (std::size_t i = 0; i < pred.size(); ++i)
        for (int c = 0; c < kNumServos; ++c)
            grad_pred[i][c] += config.lambda * con_grad[i][c];
    return mse + config.lambda * con;
}

}  // namespace mimic
