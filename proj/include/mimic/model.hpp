#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "mimic/face_sim.hpp"
#include "mimic/nn/attention.hpp"
#include "mimic/nn/kan.hpp"
#include "mimic/servo_layout.hpp"

namespace mimic {

enum class ModelKind { AttentionKan, MlpBlendshape, MlpLandmark };

std::string model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& s);

struct ModelConfig {
    ModelKind kind = ModelKind::AttentionKan;
    int d_model = 16;
    std::array<int, 4> kan_widths = {kNumFeatures, 40, 40, kNumServos};
    int mlp_hidden = 64;  // both hidden layers of the MLP baselines
    bool attention_enabled = true;
    int spline_intervals = 5;
    double spline_lo = -1.5;
    double spline_hi = 1.5;
    std::uint64_t seed = 1;

    int input_dim() const {
        return kind == ModelKind::MlpLandmark ? 2 * kNumLandmarks : kNumFeatures;
    }
    void validate() const;
};

// Training provenance stored in checkpoints.
struct TrainMeta {
    int epochs_run = 0;
    int best_epoch = -1;
    double final_train_loss = 0.0;
    double best_test_loss = 0.0;
    std::uint64_t data_seed = 0;
    double lr = 0.0;
    double lambda = 0.0;
    int batch_size = 0;
};

// Gradient buffers matching a model's parameter list.
using GradSet = std::vector<nn::Mat>;

class Model {
public:
    struct Tape {
        virtual ~Tape() = default;
    };

    virtual ~Model() = default;

    virtual const ModelConfig& config() const = 0;

    // Pure map: input vector -> 25 servo commands in (0,1). Thread-safe on
    // an immutable model.
    virtual ServoFrame forward(const std::vector<double>& input) const = 0;

    virtual std::unique_ptr<Tape> make_tape() const = 0;
    virtual ServoFrame forward_train(const std::vector<double>& input,
                                     Tape& tape) const = 0;
    // Accumulates parameter gradients into `grads` (ordered like params());
    // optionally reports the gradient w.r.t. the input.
    virtual void backward(const Tape& tape, const ServoFrame& grad_output,
                          GradSet& grads,
                          std::vector<double>* grad_input = nullptr) const = 0;

    virtual std::vector<nn::Mat*> params() = 0;
    virtual std::vector<const nn::Mat*> params() const = 0;
    virtual std::vector<std::string> param_names() const = 0;

    GradSet make_grad_set() const;
    std::size_t num_params() const;
};

// Seeded construction of any of the three compared kinds.
std::unique_ptr<Model> build_model(const ModelConfig& config);

ServoFrame model_forward(const Model& model, const FeatureVector& fv);

std::vector<ServoFrame> forward_batch(const Model& model,
                                      const std::vector<std::vector<double>>& batch);

// Checkpoint file: magic, version, config/meta text header, section table,
// little-endian float64 parameter blob. Round trips are bit-exact.
void save_checkpoint(const Model& model, const TrainMeta& meta,
                     const std::string& path);

struct LoadedModel {
    std::unique_ptr<Model> model;
    TrainMeta meta;
};

LoadedModel load_checkpoint(const std::string& path);

struct LatencyStats {
    double mean_seconds = 0.0;
    double max_seconds = 0.0;
};

// Wall-clock single-frame forward statistics on one worker. n_frames >= 100.
LatencyStats measure_latency(const Model& model, int n_frames,
                             std::uint64_t input_seed = 42);

}  // namespace mimic
