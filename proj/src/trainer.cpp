#include "mimic/trainer.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "mimic/nn/adam.hpp"
#include "mimic/rng.hpp"
#include "mimic/worker_pool.hpp"

namespace mimic {

std::unique_ptr<Model> clone_model(const Model& model) {
    auto copy = build_model(model.config());
    const auto src = model.params();
    auto dst = copy->params();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i]->d = src[i]->d;
    return copy;
}

const std::vector<double>& record_input(const DatasetRecord& r, ModelKind kind) {
    if (kind == ModelKind::MlpLandmark) {
        if (r.landmarks.empty())
            throw ArgumentError("record " + std::to_string(r.index) +
                                " has no landmarks; regenerate the dataset with them");
        return r.landmarks;
    }
    return r.features;
}

namespace {

// Per-sample total loss and gradient w.r.t. the prediction (unscaled by the
// batch size; the caller divides).
double sample_loss_grad(const ServoFrame& pred, const ServoFrame& target,
                        const LossConfig& cfg, ServoFrame& grad) {
    grad.assign(kNumServos, 0.0);
    double sq = 0.0;
    for (int c = 0; c < kNumServos; ++c) {
        const double d = pred[c] - target[c];
        sq += d * d;
        grad[c] = 2.0 * d / kNumServos;
    }
    double loss = sq / kNumServos;
    if (cfg.lambda != 0.0) {
        const double we = cfg.eye_pairs.empty() ? 0.0 : 1.0 / cfg.eye_pairs.size();
        const double wb = cfg.brow_pairs.empty() ? 0.0 : 1.0 / cfg.brow_pairs.size();
        double eye = 0.0, brow = 0.0;
        auto sgn0 = [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
        for (const auto& [l, r] : cfg.eye_pairs) {
            const double d = pred[l] - pred[r];
            eye += std::abs(d);
            grad[l] += cfg.lambda * we * sgn0(d);
            grad[r] -= cfg.lambda * we * sgn0(d);
        }
        for (const auto& [l, r] : cfg.brow_pairs) {
            const double d = pred[l] - pred[r];
            brow += std::abs(d);
            grad[l] += cfg.lambda * wb * sgn0(d);
            grad[r] -= cfg.lambda * wb * sgn0(d);
        }
        loss += cfg.lambda * (eye * we + brow * wb);
    }
    return loss;
}

}  // namespace

EvalStats evaluate_model(const Model& model, const Dataset& data,
                         const LossConfig& loss_cfg) {
    if (data.records.empty()) throw ArgumentError("evaluate_model: empty dataset");
    const ModelKind kind = model.config().kind;

    // per-chunk partial sums merged in chunk order: bit-identical for any
    // worker count
    const std::size_t n = data.records.size();
    const std::size_t num_chunks = (n + kDefaultChunkSize - 1) / kDefaultChunkSize;
    struct Partial {
        double mse = 0.0, mae = 0.0, con = 0.0;
    };
    std::vector<Partial> partials(num_chunks);
    parallel_chunks(n, kDefaultChunkSize, [&](std::size_t lo, std::size_t hi,
                                              std::size_t chunk) {
        Partial p;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& r = data.records[i];
            const ServoFrame pred = model.forward(record_input(r, kind));
            double sq = 0.0, abs_err = 0.0;
            for (int c = 0; c < kNumServos; ++c) {
                const double d = pred[c] - r.servo[c];
                sq += d * d;
                abs_err += std::abs(d);
            }
            p.mse += sq / kNumServos;
            p.mae += abs_err / kNumServos;
            if (!loss_cfg.eye_pairs.empty() || !loss_cfg.brow_pairs.empty()) {
                double eye = 0.0, brow = 0.0;
                for (const auto& [l, rr] : loss_cfg.eye_pairs)
                    eye += std::abs(pred[l] - pred[rr]);
                for (const auto& [l, rr] : loss_cfg.brow_pairs)
                    brow += std::abs(pred[l] - pred[rr]);
                if (!loss_cfg.eye_pairs.empty()) eye /= loss_cfg.eye_pairs.size();
                if (!loss_cfg.brow_pairs.empty()) brow /= loss_cfg.brow_pairs.size();
                p.con += eye + brow;
            }
        }
        partials[chunk] = p;
    });

    EvalStats s;
    for (const Partial& p : partials) {
        s.mse += p.mse;
        s.mae += p.mae;
        s.consistency += p.con;
    }
    s.mse /= static_cast<double>(n);
    s.mae /= static_cast<double>(n);
    s.consistency /= static_cast<double>(n);
    s.total = s.mse + loss_cfg.lambda * s.consistency;
    return s;
}

std::vector<double> per_sample_errors(const Model& model, const Dataset& data) {
    const ModelKind kind = model.config().kind;
    std::vector<double> errors(data.records.size(), 0.0);
    parallel_chunks(data.records.size(), kDefaultChunkSize,
                    [&](std::size_t lo, std::size_t hi, std::size_t) {
                        for (std::size_t i = lo; i < hi; ++i) {
                            const auto& r = data.records[i];
                            const ServoFrame pred = model.forward(record_input(r, kind));
                            double abs_err = 0.0;
                            for (int c = 0; c < kNumServos; ++c)
                                abs_err += std::abs(pred[c] - r.servo[c]);
                            errors[i] = abs_err / kNumServos;
                        }
                    });
    return errors;
}

TrainResult train_model(const Dataset& train, const Dataset& test,
                        const TrainConfig& cfg, std::ostream* log) {
    if (train.records.empty() || test.records.empty())
        throw ArgumentError("train_model: empty split");
    if (cfg.batch_size < 1) throw ArgumentError("batch_size must be >= 1");
    if (cfg.epochs < 1) throw ArgumentError("epochs must be >= 1");

    const ServoLayout layout = make_default_layout();
    const LossConfig loss_cfg = make_loss_config(layout, cfg.lambda);

    auto model = build_model(cfg.model);
    const ModelKind kind = cfg.model.kind;

    auto params = model->params();
    nn::AdamConfig adam_cfg;
    adam_cfg.lr = cfg.lr;
    nn::AdamState adam(adam_cfg, params);

    GradSet grads = model->make_grad_set();
    auto tape = model->make_tape();
    ServoFrame sample_grad;

    TrainResult result;
    result.meta.lr = cfg.lr;
    result.meta.lambda = cfg.lambda;
    result.meta.batch_size = cfg.batch_size;
    result.meta.data_seed = train.base_seed;

    double best_test = 0.0;
    int best_epoch = -1;
    int stagnant = 0;
    double last_train_loss = 0.0;

    std::vector<std::size_t> order(train.records.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        SplitMix64 rng(derive_seed(cfg.shuffle_seed, static_cast<std::uint64_t>(epoch)));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.next_below(i)]);

        double epoch_loss = 0.0;
        std::size_t pos = 0;
        while (pos < order.size()) {
            const std::size_t bsz =
                std::min<std::size_t>(cfg.batch_size, order.size() - pos);
            for (auto& g : grads) g.fill(0.0);
            double batch_loss = 0.0;
            for (std::size_t b = 0; b < bsz; ++b) {
                const auto& rec = train.records[order[pos + b]];
                const ServoFrame pred =
                    model->forward_train(record_input(rec, kind), *tape);
                batch_loss += sample_loss_grad(pred, rec.servo, loss_cfg, sample_grad);
                for (double& g : sample_grad) g /= static_cast<double>(bsz);
                model->backward(*tape, sample_grad, grads);
            }
            nn::adam_step(params, grads, adam);
            epoch_loss += batch_loss;
            pos += bsz;
        }
        last_train_loss = epoch_loss / static_cast<double>(order.size());

        const EvalStats test_stats = evaluate_model(*model, test, loss_cfg);
        result.history.push_back(
            {epoch, last_train_loss, test_stats.total, test_stats.mse});
        if (log)
            (*log) << "epoch " << epoch << " train_loss " << last_train_loss
                   << " test_loss " << test_stats.total << " test_mse "
                   << test_stats.mse << "\n";

        if (best_epoch < 0 || test_stats.total < best_test) {
            best_test = test_stats.total;
            best_epoch = epoch;
            result.best_model = clone_model(*model);
            stagnant = 0;
        } else if (++stagnant >= cfg.patience) {
            break;
        }
    }

    result.meta.epochs_run = static_cast<int>(result.history.size());
    result.meta.best_epoch = best_epoch;
    result.meta.final_train_loss = last_train_loss;
    result.meta.best_test_loss = best_test;
    result.best_eval = evaluate_model(*result.best_model, test, loss_cfg);
    return result;
}

}  // namespace mimic
