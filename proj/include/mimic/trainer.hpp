#pragma once

#include <iosfwd>
#include <memory>

#include "mimic/dataset.hpp"
#include "mimic/losses.hpp"
#include "mimic/model.hpp"

namespace mimic {

struct TrainConfig {
    ModelConfig model;
    double lr = 1e-5;
    double lambda = 0.01;
    int batch_size = 256;
    int epochs = 300;
    int patience = 30;  // early stop after this many stagnant epochs
    std::uint64_t shuffle_seed = 7;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;  // total loss (mse + lambda * consistency)
    double test_loss = 0.0;   // total loss on the test split
    double test_mse = 0.0;
};

struct EvalStats {
    double mse = 0.0;
    double consistency = 0.0;
    double total = 0.0;
    double mae = 0.0;  // mean per-servo absolute error
};

struct TrainResult {
    std::unique_ptr<Model> best_model;  // parameters at the best test epoch
    TrainMeta meta;
    std::vector<EpochStats> history;
    EvalStats best_eval;  // best model re-evaluated on the test split
};

std::unique_ptr<Model> clone_model(const Model& model);

// Model input column for a record: features or flattened landmarks,
// depending on the model kind.
const std::vector<double>& record_input(const DatasetRecord& r, ModelKind kind);

EvalStats evaluate_model(const Model& model, const Dataset& data,
                         const LossConfig& loss_cfg);

// Per-sample mean absolute servo errors (for CED curves).
std::vector<double> per_sample_errors(const Model& model, const Dataset& data);

// Deterministic minibatch Adam training; logs one line per epoch to `log`
// when given.
TrainResult train_model(const Dataset& train, const Dataset& test,
                        const TrainConfig& cfg, std::ostream* log = nullptr);

}  // namespace mimic
