#pragma once

#include <cmath>
#include <vector>

#include "mimic/nn/mat.hpp"

namespace mimic::nn {

struct AdamConfig {
    double lr = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Bias-corrected Adam over a list of parameter matrices. Moment buffers are
// zero-initialized and must keep matching the parameter shapes.
struct AdamState {
    AdamConfig cfg;
    long long step = 0;
    std::vector<Mat> m, v;

    AdamState() = default;
    AdamState(const AdamConfig& c, const std::vector<Mat*>& params) : cfg(c) {
        m.reserve(params.size());
        v.reserve(params.size());
        for (const Mat* p : params) {
            m.emplace_back(p->rows, p->cols);
            v.emplace_back(p->rows, p->cols);
        }
    }
};

inline void adam_step(std::vector<Mat*>& params, const std::vector<Mat>& grads,
                      AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw DimensionError("adam_step: parameter/gradient list size mismatch");
    ++state.step;
    const double b1 = state.cfg.beta1, b2 = state.cfg.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Mat& p = *params[i];
        const Mat& g = grads[i];
        if (p.rows != g.rows || p.cols != g.cols)
            throw DimensionError("adam_step: gradient shape mismatch at index " +
                                 std::to_string(i));
        Mat& m = state.m[i];
        Mat& v = state.v[i];
        for (std::size_t j = 0; j < p.d.size(); ++j) {
            m.d[j] = b1 * m.d[j] + (1.0 - b1) * g.d[j];
            v.d[j] = b2 * v.d[j] + (1.0 - b2) * g.d[j] * g.d[j];
            const double mhat = m.d[j] / bc1;
            const double vhat = v.d[j] / bc2;
            p.d[j] -= state.cfg.lr * mhat / (std::sqrt(vhat) + state.cfg.eps);
        }
    }
}

}  // namespace mimic::nn
