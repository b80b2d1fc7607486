#pragma once

#include <vector>

#include "mimic/nn/mat.hpp"
#include "mimic/nn/spline.hpp"

namespace mimic::nn {

// One KAN layer: every edge (q, p) carries the univariate function
//   phi_qp(x) = w_b[q,p] * silu(x) + w_s[q,p] * sum_i c[q,p,i] * B_i(x)
// and node q outputs the sum of its incoming edge values.
struct KanLayer {
    int in_dim = 0;
    int out_dim = 0;
    SplineGrid grid;
    Mat w_b;    // out x in
    Mat w_s;    // out x in
    Mat coef;   // (out*in) x num_basis, row index q*in_dim + p

    KanLayer() = default;
    KanLayer(int in, int out, const SplineGrid& g);

    // w_b = 1, w_s = 0.1, spline coefficients ~ N(0, 0.1^2).
    void init(SplitMix64& rng);
};

// Per-input-coordinate cache written by the forward pass; a backward pass
// must use the cache of its own forward.
struct KanCache {
    bool valid = false;
    std::vector<double> x;
    std::vector<double> silu_x, dsilu_x;
    std::vector<SplineSupport> support;  // basis values/derivs per input coordinate
};

struct KanGrads {
    Mat w_b, w_s, coef;
    std::vector<double> x;  // gradient w.r.t. the layer input

    explicit KanGrads(const KanLayer& layer)
        : w_b(layer.out_dim, layer.in_dim),
          w_s(layer.out_dim, layer.in_dim),
          coef(layer.out_dim * layer.in_dim, layer.grid.num_basis()),
          x(layer.in_dim, 0.0) {}
};

std::vector<double> kan_forward(const KanLayer& layer, const std::vector<double>& x,
                                KanCache& cache);

// Analytic gradients w.r.t. input and all parameters. Parameter gradients
// are accumulated into `grads` (callers zero them per batch); the input
// gradient is overwritten.
void kan_backward(const KanLayer& layer, const KanCache& cache,
                  const std::vector<double>& grad_out, KanGrads& grads);

}  // namespace mimic::nn
