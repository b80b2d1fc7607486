#include "mimic/nn/attention.hpp"

#include <cmath>

#include "mimic/nn/activations.hpp"

namespace mimic::nn {

Mat positional_encoding(int num_tokens, int d_model) {
    if (num_tokens < 1) throw ArgumentError("positional encoding needs >= 1 token");
    if (d_model < 2 || d_model % 2 != 0)
        throw ArgumentError("positional encoding d_model must be even and >= 2");
    Mat pe(num_tokens, d_model);
    for (int pos = 0; pos < num_tokens; ++pos) {
        for (int i = 0; i < d_model / 2; ++i) {
            const double denom = std::pow(10000.0, 2.0 * i / d_model);
            pe(pos, 2 * i) = std::sin(pos / denom);
            pe(pos, 2 * i + 1) = std::cos(pos / denom);
        }
    }
    return pe;
}

namespace {

// out = a * b, with a: r x k, b: k x c.
void matmul(const Mat& a, const Mat& b, Mat& out) {
    out = Mat(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int l = 0; l < a.cols; ++l) {
            const double av = a(i, l);
            if (av == 0.0) continue;
            const double* brow = &b.d[static_cast<std::size_t>(l) * b.cols];
            double* orow = &out.d[static_cast<std::size_t>(i) * out.cols];
            for (int j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
    }
}

// out += a^T * b, with a: k x r, b: k x c.
void matmul_at_b_accum(const Mat& a, const Mat& b, Mat& out) {
    for (int l = 0; l < a.rows; ++l) {
        const double* arow = &a.d[static_cast<std::size_t>(l) * a.cols];
        const double* brow = &b.d[static_cast<std::size_t>(l) * b.cols];
        for (int i = 0; i < a.cols; ++i) {
            const double av = arow[i];
            if (av == 0.0) continue;
            double* orow = &out.d[static_cast<std::size_t>(i) * out.cols];
            for (int j = 0; j < b.cols; ++j) orow[j] += av * brow[j];
        }
    }
}

// out = a * b^T, with a: r x k, b: c x k.
void matmul_a_bt(const Mat& a, const Mat& b, Mat& out) {
    out = Mat(a.rows, b.rows);
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = &a.d[static_cast<std::size_t>(i) * a.cols];
        for (int j = 0; j < b.rows; ++j) {
            const double* brow = &b.d[static_cast<std::size_t>(j) * b.cols];
            double acc = 0.0;
            for (int l = 0; l < a.cols; ++l) acc += arow[l] * brow[l];
            out(i, j) = acc;
        }
    }
}

}  // namespace

Mat attention_forward(const AttentionParams& params, const Mat& tokens,
                      AttentionCache& cache) {
    if (tokens.cols != params.d)
        throw DimensionError("attention: token width " + std::to_string(tokens.cols) +
                             " != d_model " + std::to_string(params.d));
    const int T = tokens.rows;
    cache.x = tokens;
    matmul(tokens, params.wq, cache.q);
    matmul(tokens, params.wk, cache.k);
    matmul(tokens, params.wv, cache.v);

    matmul_a_bt(cache.q, cache.k, cache.attn);  // T x T scores
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(params.d));
    for (double& s : cache.attn.d) s *= inv_sqrt_d;
    for (int i = 0; i < T; ++i)
        softmax_row(&cache.attn.d[static_cast<std::size_t>(i) * T], T);
    cache.valid = true;

    Mat out;
    matmul(cache.attn, cache.v, out);
    return out;
}

void attention_backward(const AttentionParams& params, const AttentionCache& cache,
                        const Mat& grad_out, AttentionGrads& grads) {
    if (!cache.valid) throw StateError("attention backward without a forward cache");
    const int T = cache.x.rows;
    require_shape(grad_out, T, params.d, "attention grad_out");

    // dV = A^T dO
    Mat dv(T, params.d);
    matmul_at_b_accum(cache.attn, grad_out, dv);
    // dA = dO V^T
    Mat da;
    matmul_a_bt(grad_out, cache.v, da);
    // softmax backward per row: dS_ij = A_ij (dA_ij - sum_k dA_ik A_ik)
    Mat ds(T, T);
    for (int i = 0; i < T; ++i) {
        const double* arow = &cache.attn.d[static_cast<std::size_t>(i) * T];
        const double* darow = &da.d[static_cast<std::size_t>(i) * T];
        double dot = 0.0;
        for (int j = 0; j < T; ++j) dot += darow[j] * arow[j];
        double* dsrow = &ds.d[static_cast<std::size_t>(i) * T];
        for (int j = 0; j < T; ++j) dsrow[j] = arow[j] * (darow[j] - dot);
    }
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(params.d));
    for (double& v : ds.d) v *= inv_sqrt_d;

    // dQ = dS K, dK = dS^T Q
    Mat dq, dk(T, params.d);
    matmul(ds, cache.k, dq);
    matmul_at_b_accum(ds, cache.q, dk);

    // Parameter grads accumulate; input grad overwrites.
    matmul_at_b_accum(cache.x, dq, grads.wq);
    matmul_at_b_accum(cache.x, dk, grads.wk);
    matmul_at_b_accum(cache.x, dv, grads.wv);

    grads.x = Mat(T, params.d);
    Mat tmp;
    matmul_a_bt(dq, params.wq, tmp);
    for (std::size_t i = 0; i < grads.x.d.size(); ++i) grads.x.d[i] += tmp.d[i];
    matmul_a_bt(dk, params.wk, tmp);
    for (std::size_t i = 0; i < grads.x.d.size(); ++i) grads.x.d[i] += tmp.d[i];
    matmul_a_bt(dv, params.wv, tmp);
    for (std::size_t i = 0; i < grads.x.d.size(); ++i) grads.x.d[i] += tmp.d[i];
}

}  // namespace mimic::nn
