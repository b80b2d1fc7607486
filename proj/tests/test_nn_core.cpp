#include <doctest.h>

#include <cmath>
#include <vector>

#include "mimic/nn/activations.hpp"
#include "mimic/nn/adam.hpp"
#include "mimic/nn/attention.hpp"
#include "mimic/nn/grad_check.hpp"
#include "mimic/nn/kan.hpp"
#include "mimic/nn/spline.hpp"
#include "mimic/rng.hpp"

using namespace mimic;
using namespace mimic::nn;

namespace {

// Textbook Cox-de Boor recursion, used as the independent oracle for the
// fast evaluator (0/0 terms resolve to 0; half-open interval convention).
double cox_de_boor(const std::vector<double>& t, int i, int k, double x) {
    if (k == 0) return (t[i] <= x && x < t[i + 1]) ? 1.0 : 0.0;
    double a = 0.0, b = 0.0;
    if (t[i + k] != t[i])
        a = (x - t[i]) / (t[i + k] - t[i]) * cox_de_boor(t, i, k - 1, x);
    if (t[i + k + 1] != t[i + 1])
        b = (t[i + k + 1] - x) / (t[i + k + 1] - t[i + 1]) *
            cox_de_boor(t, i + 1, k - 1, x);
    return a + b;
}

std::vector<double> flatten_kan_params(const KanLayer& layer) {
    std::vector<double> out;
    out.insert(out.end(), layer.w_b.d.begin(), layer.w_b.d.end());
    out.insert(out.end(), layer.w_s.d.begin(), layer.w_s.d.end());
    out.insert(out.end(), layer.coef.d.begin(), layer.coef.d.end());
    return out;
}

void unflatten_kan_params(KanLayer& layer, const std::vector<double>& flat) {
    std::size_t pos = 0;
    for (double& v : layer.w_b.d) v = flat[pos++];
    for (double& v : layer.w_s.d) v = flat[pos++];
    for (double& v : layer.coef.d) v = flat[pos++];
}

}  // namespace

TEST_SUITE_BEGIN("nn_core");

TEST_CASE("bspline partition of unity") {
    SplineGrid grid;  // defaults: G=5 on [-1.5, 1.5]
    CHECK(grid.num_basis() == 8);

    const double mid = 0.5 * (grid.lo + grid.hi);
    double sum = 0.0;
    for (double v : bspline_basis(mid, grid)) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-12);

    SplitMix64 rng(11);
    for (int n = 0; n < 1000; ++n) {
        const double x = rng.uniform(grid.lo, grid.hi);
        double s = 0.0;
        for (double v : bspline_basis(x, grid)) s += v;
        CHECK(std::abs(s - 1.0) < 1e-9);
    }
}

TEST_CASE("bspline local support: at most 4 nonzero") {
    SplineGrid grid(7, -2.0, 3.0);
    SplitMix64 rng(5);
    for (int n = 0; n < 200; ++n) {
        const double x = rng.uniform(grid.lo, grid.hi);
        int nonzero = 0;
        for (double v : bspline_basis(x, grid))
            if (v != 0.0) ++nonzero;
        CHECK(nonzero <= 4);
        CHECK(nonzero >= 1);
    }
}

TEST_CASE("bspline matches independent Cox-de Boor recursion") {
    for (int G : {3, 5, 9}) {
        SplineGrid grid(G, -1.5, 1.5);
        SplitMix64 rng(77 + G);
        for (int n = 0; n < 300; ++n) {
            // interior points: the recursion uses the half-open convention,
            // which differs from the clamped evaluator only at x = hi
            const double x = rng.uniform(grid.lo + 1e-9, grid.hi - 1e-9);
            const auto fast = bspline_basis(x, grid);
            for (int i = 0; i < grid.num_basis(); ++i) {
                const double ref = cox_de_boor(grid.knots, i, 3, x);
                CHECK(std::abs(fast[i] - ref) < 1e-12);
            }
        }
    }
}

TEST_CASE("bspline clamped outside the domain") {
    SplineGrid grid;
    const auto at_hi = bspline_basis(grid.hi, grid);
    const auto beyond = bspline_basis(grid.hi + 2.0, grid);
    for (int i = 0; i < grid.num_basis(); ++i)
        CHECK(beyond[i] == doctest::Approx(at_hi[i]).epsilon(1e-15));
    CHECK(at_hi[grid.num_basis() - 1] == doctest::Approx(1.0));

    const auto sup = bspline_support(grid.lo - 1.0, grid);
    for (double d : sup.derivs) CHECK(d == 0.0);
}

TEST_CASE("bspline derivative matches finite differences") {
    SplineGrid grid;
    SplitMix64 rng(123);
    for (int n = 0; n < 200; ++n) {
        const double x = rng.uniform(grid.lo + 0.01, grid.hi - 0.01);
        const auto sup = bspline_support(x, grid);
        const double h = 1e-6;
        const auto up = bspline_basis(x + h, grid);
        const auto dn = bspline_basis(x - h, grid);
        for (int j = 0; j < 4; ++j) {
            const double fd = (up[sup.first + j] - dn[sup.first + j]) / (2.0 * h);
            CHECK(std::abs(fd - sup.derivs[j]) < 1e-5);
        }
    }
}

TEST_CASE("spline curve is C2 at the knots") {
    // Second differences on a fine grid must not spike when crossing knots.
    SplineGrid grid;
    SplitMix64 rng(9);
    std::vector<double> c(grid.num_basis());
    for (double& v : c) v = rng.gaussian();

    auto phi = [&](double x) {
        const auto b = bspline_basis(x, grid);
        double acc = 0.0;
        for (int i = 0; i < grid.num_basis(); ++i) acc += c[i] * b[i];
        return acc;
    };

    const double h = 1e-4;
    double max_interior = 0.0, max_at_knot = 0.0;
    for (double x = grid.lo + 10 * h; x < grid.hi - 10 * h; x += h) {
        const double d2 = phi(x + h) - 2.0 * phi(x) + phi(x - h);
        bool near_knot = false;
        for (double k : grid.knots)
            if (std::abs(x - k) < 2 * h) near_knot = true;
        if (near_knot)
            max_at_knot = std::max(max_at_knot, std::abs(d2));
        else
            max_interior = std::max(max_interior, std::abs(d2));
    }
    CHECK(max_at_knot <= 10.0 * max_interior + 1e-9);
}

TEST_CASE("silu values and derivative") {
    CHECK(silu(0.0) == 0.0);
    CHECK(std::abs(silu(20.0) - 20.0) < 1e-6);
    CHECK(std::abs(silu(-20.0)) < 1e-6);

    const double eps = 1e-6;
    const double fd0 = (silu(eps) - silu(-eps)) / (2 * eps);
    CHECK(std::abs(fd0 - 0.5) < 1e-9);
    CHECK(std::abs(silu_deriv(0.0) - 0.5) < 1e-15);

    SplitMix64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform(-5.0, 5.0);
        const double fd = (silu(x + eps) - silu(x - eps)) / (2 * eps);
        CHECK(std::abs(fd - silu_deriv(x)) < 1e-8);
    }
}

TEST_CASE("kan layer zero weights give zero output") {
    SplineGrid grid;
    KanLayer layer(3, 2, grid);
    KanCache cache;
    const auto y = kan_forward(layer, {0.3, -0.7, 1.2}, cache);
    for (double v : y) CHECK(v == 0.0);
}

TEST_CASE("kan single edge silu at zero") {
    SplineGrid grid;
    KanLayer layer(1, 1, grid);
    layer.w_b(0, 0) = 1.0;
    KanCache cache;
    const auto y = kan_forward(layer, {0.0}, cache);
    CHECK(y[0] == 0.0);
}

TEST_CASE("kan forward matches scalar-loop oracle") {
    SplineGrid grid;
    KanLayer layer(5, 4, grid);
    SplitMix64 rng(42);
    layer.init(rng);
    for (double& v : layer.w_b.d) v = rng.gaussian();
    for (double& v : layer.w_s.d) v = rng.gaussian();

    for (int n = 0; n < 50; ++n) {
        std::vector<double> x(5);
        for (double& v : x) v = rng.uniform(grid.lo + 1e-6, grid.hi - 1e-6);
        KanCache cache;
        const auto y = kan_forward(layer, x, cache);

        for (int q = 0; q < 4; ++q) {
            double ref = 0.0;
            for (int p = 0; p < 5; ++p) {
                double spline = 0.0;
                for (int i = 0; i < grid.num_basis(); ++i)
                    spline += layer.coef(q * 5 + p, i) *
                              cox_de_boor(grid.knots, i, 3, x[p]);
                ref += layer.w_b(q, p) * (x[p] / (1.0 + std::exp(-x[p]))) +
                       layer.w_s(q, p) * spline;
            }
            CHECK(std::abs(y[q] - ref) < 1e-12);
        }
    }
}

TEST_CASE("kan backward matches finite differences") {
    SplineGrid grid;
    KanLayer layer(4, 3, grid);
    SplitMix64 rng(101);
    layer.init(rng);

    std::vector<double> x(4), w(3);
    for (double& v : x) v = rng.uniform(-1.2, 1.2);
    for (double& v : w) v = rng.gaussian();

    KanCache cache;
    kan_forward(layer, x, cache);
    KanGrads grads(layer);
    kan_backward(layer, cache, w, grads);

    auto loss_at_x = [&](const std::vector<double>& xv) {
        KanCache c;
        const auto y = kan_forward(layer, xv, c);
        double acc = 0.0;
        for (int q = 0; q < 3; ++q) acc += w[q] * y[q];
        return acc;
    };
    CHECK(grad_check(loss_at_x, x, grads.x, 1e-5) < 1e-4);

    std::vector<double> pflat = flatten_kan_params(layer);
    std::vector<double> pgrad;
    pgrad.insert(pgrad.end(), grads.w_b.d.begin(), grads.w_b.d.end());
    pgrad.insert(pgrad.end(), grads.w_s.d.begin(), grads.w_s.d.end());
    pgrad.insert(pgrad.end(), grads.coef.d.begin(), grads.coef.d.end());
    KanLayer scratch = layer;
    auto loss_at_params = [&](const std::vector<double>& pv) {
        unflatten_kan_params(scratch, pv);
        KanCache c;
        const auto y = kan_forward(scratch, x, c);
        double acc = 0.0;
        for (int q = 0; q < 3; ++q) acc += w[q] * y[q];
        return acc;
    };
    CHECK(grad_check(loss_at_params, pflat, pgrad, 1e-5) < 1e-4);
}

TEST_CASE("kan backward with zero upstream gradient") {
    SplineGrid grid;
    KanLayer layer(3, 2, grid);
    SplitMix64 rng(7);
    layer.init(rng);
    KanCache cache;
    kan_forward(layer, {0.1, -0.4, 0.9}, cache);
    KanGrads grads(layer);
    kan_backward(layer, cache, {0.0, 0.0}, grads);
    for (double v : grads.x) CHECK(v == 0.0);
    for (double v : grads.w_b.d) CHECK(v == 0.0);
    for (double v : grads.w_s.d) CHECK(v == 0.0);
    for (double v : grads.coef.d) CHECK(v == 0.0);
}

TEST_CASE("kan constant spline has zero input gradient") {
    // equal coefficients + partition of unity => spline is constant
    SplineGrid grid;
    KanLayer layer(1, 1, grid);
    layer.w_b(0, 0) = 0.0;
    layer.w_s(0, 0) = 1.0;
    for (int i = 0; i < grid.num_basis(); ++i) layer.coef(0, i) = 2.5;

    KanCache cache;
    const auto y = kan_forward(layer, {0.37}, cache);
    CHECK(std::abs(y[0] - 2.5) < 1e-12);
    KanGrads grads(layer);
    kan_backward(layer, cache, {1.0}, grads);
    CHECK(std::abs(grads.x[0]) < 1e-10);
}

TEST_CASE("kan backward without forward cache is a state error") {
    SplineGrid grid;
    KanLayer layer(2, 2, grid);
    KanCache cache;  // never written
    KanGrads grads(layer);
    CHECK_THROWS_AS(kan_backward(layer, cache, {1.0, 1.0}, grads), StateError);
}

TEST_CASE("kan dimension mismatch") {
    SplineGrid grid;
    KanLayer layer(3, 2, grid);
    KanCache cache;
    CHECK_THROWS_AS(kan_forward(layer, {1.0, 2.0}, cache), DimensionError);
}

TEST_CASE("positional encoding") {
    const Mat pe = positional_encoding(55, 16);
    for (int i = 0; i < 8; ++i) {
        CHECK(pe(0, 2 * i) == 0.0);
        CHECK(pe(0, 2 * i + 1) == 1.0);
    }
    CHECK(pe(1, 0) == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
    CHECK(pe(1, 0) == doctest::Approx(0.8414709848).epsilon(1e-9));
    for (double v : pe.d) {
        CHECK(v <= 1.0);
        CHECK(v >= -1.0);
    }
    CHECK_THROWS_AS(positional_encoding(10, 7), ArgumentError);
}

TEST_CASE("attention on identical tokens averages to the V row") {
    AttentionParams params(6);
    SplitMix64 rng(19);
    params.init(rng);

    Mat x(5, 6);
    std::vector<double> row = {0.3, -0.2, 0.9, 0.0, 1.1, -0.5};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 6; ++j) x(i, j) = row[j];

    AttentionCache cache;
    const Mat out = attention_forward(params, x, cache);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 6; ++j) {
            CHECK(out(i, j) == doctest::Approx(out(0, j)).epsilon(1e-13));
            CHECK(out(i, j) == doctest::Approx(cache.v(0, j)).epsilon(1e-12));
        }
}

TEST_CASE("attention rows sum to one and output stays in the V hull") {
    AttentionParams params(8);
    SplitMix64 rng(31);
    params.init(rng);
    Mat x = Mat::gaussian(7, 8, 0.0, 1.0, rng);
    AttentionCache cache;
    const Mat out = attention_forward(params, x, cache);

    for (int i = 0; i < 7; ++i) {
        double s = 0.0;
        for (int j = 0; j < 7; ++j) s += cache.attn(i, j);
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
    for (int c = 0; c < 8; ++c) {
        double lo = cache.v(0, c), hi = cache.v(0, c);
        for (int j = 1; j < 7; ++j) {
            lo = std::min(lo, cache.v(j, c));
            hi = std::max(hi, cache.v(j, c));
        }
        for (int i = 0; i < 7; ++i) {
            CHECK(out(i, c) >= lo - 1e-12);
            CHECK(out(i, c) <= hi + 1e-12);
        }
    }
}

TEST_CASE("attention backward matches finite differences") {
    const int T = 4, d = 6;
    AttentionParams params(d);
    SplitMix64 rng(57);
    params.init(rng);
    Mat x = Mat::gaussian(T, d, 0.0, 0.8, rng);
    Mat w = Mat::gaussian(T, d, 0.0, 1.0, rng);  // loss weights

    AttentionCache cache;
    attention_forward(params, x, cache);
    AttentionGrads grads(params, T);
    attention_backward(params, cache, w, grads);

    auto loss_with = [&](const AttentionParams& p, const Mat& xv) {
        AttentionCache c;
        const Mat o = attention_forward(p, xv, c);
        double acc = 0.0;
        for (std::size_t i = 0; i < o.d.size(); ++i) acc += w.d[i] * o.d[i];
        return acc;
    };

    // input tokens
    auto fx = [&](const std::vector<double>& flat) {
        Mat xv = x;
        xv.d = flat;
        return loss_with(params, xv);
    };
    CHECK(grad_check(fx, x.d, grads.x.d, 1e-5) < 1e-4);

    // each projection
    auto check_param = [&](Mat AttentionParams::*field, const Mat& analytic) {
        auto fp = [&](const std::vector<double>& flat) {
            AttentionParams p = params;
            (p.*field).d = flat;
            return loss_with(p, x);
        };
        CHECK(grad_check(fp, (params.*field).d, analytic.d, 1e-5) < 1e-4);
    };
    check_param(&AttentionParams::wq, grads.wq);
    check_param(&AttentionParams::wk, grads.wk);
    check_param(&AttentionParams::wv, grads.wv);
}

TEST_CASE("adam zero gradient is the identity") {
    Mat p = Mat::constant(3, 2, 1.5);
    std::vector<Mat*> params = {&p};
    AdamState state(AdamConfig{}, params);
    std::vector<Mat> grads = {Mat(3, 2)};
    adam_step(params, grads, state);
    for (double v : p.d) CHECK(v == 1.5);
}

TEST_CASE("adam first step has magnitude about lr") {
    Mat p = Mat::constant(2, 2, 0.0);
    std::vector<Mat*> params = {&p};
    AdamConfig cfg;
    cfg.lr = 1e-3;
    AdamState state(cfg, params);
    std::vector<Mat> grads = {Mat(2, 2)};
    grads[0].d = {0.5, -2.0, 10.0, -0.01};
    adam_step(params, grads, state);
    for (std::size_t i = 0; i < p.d.size(); ++i) {
        CHECK(std::abs(p.d[i]) <= cfg.lr * 1.001);
        CHECK(std::abs(p.d[i]) >= cfg.lr * 0.99);
        CHECK(p.d[i] * grads[0].d[i] < 0.0);  // moves against the gradient
    }
}

TEST_CASE("adam trajectory matches an independent scalar oracle") {
    Mat p = Mat::constant(1, 3, 1.0);
    std::vector<Mat*> params = {&p};
    AdamConfig cfg;
    cfg.lr = 0.01;
    AdamState state(cfg, params);

    // test-local scalar re-implementation
    double ref[3] = {1.0, 1.0, 1.0};
    double m[3] = {0, 0, 0}, v[3] = {0, 0, 0};

    SplitMix64 rng(8);
    std::vector<Mat> grads = {Mat(1, 3)};
    for (int step = 1; step <= 10; ++step) {
        for (int i = 0; i < 3; ++i) grads[0].d[i] = rng.gaussian();
        adam_step(params, grads, state);
        for (int i = 0; i < 3; ++i) {
            const double g = grads[0].d[i];
            m[i] = 0.9 * m[i] + 0.1 * g;
            v[i] = 0.999 * v[i] + 0.001 * g * g;
            const double mhat = m[i] / (1.0 - std::pow(0.9, step));
            const double vhat = v[i] / (1.0 - std::pow(0.999, step));
            ref[i] -= cfg.lr * mhat / (std::sqrt(vhat) + 1e-8);
        }
        for (int i = 0; i < 3; ++i) CHECK(std::abs(p.d[i] - ref[i]) < 1e-12);
    }
}

TEST_CASE("grad_check calibration") {
    auto square = [](const std::vector<double>& x) { return x[0] * x[0]; };
    CHECK(grad_check(square, {1.0}, {2.0}, 1e-5) < 1e-8);
    CHECK(grad_check(square, {1.0}, {2.2}, 1e-5) > 1e-2);  // +10% corruption
}

TEST_SUITE_END();
