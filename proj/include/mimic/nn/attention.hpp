#pragma once

#include "mimic/nn/mat.hpp"

namespace mimic::nn {

// Single-head scaled dot-product self-attention with learned square Q/K/V
// projections applied per token:
//   A = softmax(X Wq (X Wk)^T / sqrt(d)),  output = A (X Wv).
struct AttentionParams {
    int d = 0;
    Mat wq, wk, wv;  // each d x d

    AttentionParams() = default;
    explicit AttentionParams(int d_model) : d(d_model), wq(d, d), wk(d, d), wv(d, d) {}

    void init(SplitMix64& rng) {
        wq = Mat::near_identity(d, 0.02, rng);
        wk = Mat::near_identity(d, 0.02, rng);
        wv = Mat::near_identity(d, 0.02, rng);
    }
};

struct AttentionCache {
    bool valid = false;
    Mat x;     // T x d input tokens
    Mat q, k, v;
    Mat attn;  // T x T row-stochastic weights
};

struct AttentionGrads {
    Mat wq, wk, wv;
    Mat x;  // gradient w.r.t. the input tokens

    AttentionGrads(const AttentionParams& p, int tokens)
        : wq(p.d, p.d), wk(p.d, p.d), wv(p.d, p.d), x(tokens, p.d) {}
};

// Positional encoding matrix: PE[pos, 2i] = sin(pos / 10000^(2i/d)),
// PE[pos, 2i+1] = cos(pos / 10000^(2i/d)). d must be even.
Mat positional_encoding(int num_tokens, int d_model);

Mat attention_forward(const AttentionParams& params, const Mat& tokens,
                      AttentionCache& cache);

// Parameter gradients accumulate into `grads`; the token gradient is
// overwritten.
void attention_backward(const AttentionParams& params, const AttentionCache& cache,
                        const Mat& grad_out, AttentionGrads& grads);

}  // namespace mimic::nn
