#include "mimic/nn/kan.hpp"

#include <cmath>

#include "mimic/nn/activations.hpp"

namespace mimic::nn {

KanLayer::KanLayer(int in, int out, const SplineGrid& g)
    : in_dim(in), out_dim(out), grid(g), w_b(out, in), w_s(out, in),
      coef(out * in, g.num_basis()) {
    if (in < 1 || out < 1) throw ArgumentError("KAN layer dims must be >= 1");
}

void KanLayer::init(SplitMix64& rng) {
    // Fan-in scaled silu mix: with constant unit w_b a stack of these layers
    // sums in_dim activations per node, saturating the output logistic at
    // init and leaving all nodes computing the same function of the input.
    const double sigma = 1.0 / std::sqrt(static_cast<double>(in_dim));
    for (double& v : w_b.d) v = sigma * rng.gaussian();
    w_s.fill(0.1);
    for (double& c : coef.d) c = 0.1 * rng.gaussian();
}

std::vector<double> kan_forward(const KanLayer& layer, const std::vector<double>& x,
                                KanCache& cache) {
    if (static_cast<int>(x.size()) != layer.in_dim)
        throw DimensionError("KAN layer input size " + std::to_string(x.size()) +
                             " != in_dim " + std::to_string(layer.in_dim));
    const int in = layer.in_dim, out = layer.out_dim;

    cache.x = x;
    cache.silu_x.resize(in);
    cache.dsilu_x.resize(in);
    cache.support.resize(in);
    for (int p = 0; p < in; ++p) {
        cache.silu_x[p] = silu(x[p]);
        cache.dsilu_x[p] = silu_deriv(x[p]);
        cache.support[p] = bspline_support(x[p], layer.grid);
    }
    cache.valid = true;

    std::vector<double> y(out, 0.0);
    for (int q = 0; q < out; ++q) {
        double acc = 0.0;
        for (int p = 0; p < in; ++p) {
            const SplineSupport& s = cache.support[p];
            const double* c = &layer.coef.d[static_cast<std::size_t>(q * in + p) *
                                            layer.coef.cols];
            double spline = s.values[0] * c[s.first] + s.values[1] * c[s.first + 1] +
                            s.values[2] * c[s.first + 2] + s.values[3] * c[s.first + 3];
            acc += layer.w_b(q, p) * cache.silu_x[p] + layer.w_s(q, p) * spline;
        }
        y[q] = acc;
    }
    return y;
}

void kan_backward(const KanLayer& layer, const KanCache& cache,
                  const std::vector<double>& grad_out, KanGrads& grads) {
    if (!cache.valid) throw StateError("KAN backward called without a forward cache");
    if (static_cast<int>(grad_out.size()) != layer.out_dim)
        throw DimensionError("KAN grad_out size mismatch");
    const int in = layer.in_dim;

    std::fill(grads.x.begin(), grads.x.end(), 0.0);
    for (int q = 0; q < layer.out_dim; ++q) {
        const double g = grad_out[q];
        if (g == 0.0) continue;
        for (int p = 0; p < in; ++p) {
            const SplineSupport& s = cache.support[p];
            const std::size_t row = static_cast<std::size_t>(q * in + p);
            const double* c = &layer.coef.d[row * layer.coef.cols];
            double* gc = &grads.coef.d[row * grads.coef.cols];

            double spline = 0.0, dspline = 0.0;
            for (int j = 0; j < 4; ++j) {
                spline += s.values[j] * c[s.first + j];
                dspline += s.derivs[j] * c[s.first + j];
                gc[s.first + j] += g * layer.w_s(q, p) * s.values[j];
            }
            grads.w_b(q, p) += g * cache.silu_x[p];
            grads.w_s(q, p) += g * spline;
            grads.x[p] += g * (layer.w_b(q, p) * cache.dsilu_x[p] +
                               layer.w_s(q, p) * dspline);
        }
    }
}

}  // namespace mimic::nn
