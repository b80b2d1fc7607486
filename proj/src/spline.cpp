#include "mimic/nn/spline.hpp"

#include <algorithm>
#include <cmath>

#include "mimic/errors.hpp"

namespace mimic::nn {

void SplineGrid::rebuild() {
    if (intervals < 3) throw ArgumentError("spline grid needs at least 3 intervals");
    if (!(lo < hi)) throw ArgumentError("spline domain must satisfy lo < hi");
    const int G = intervals;
    knots.assign(G + 2 * kDegree + 1, 0.0);
    const double h = (hi - lo) / G;
    for (int i = 0; i < kDegree; ++i) knots[i] = lo;
    for (int j = 0; j <= G; ++j) knots[kDegree + j] = lo + h * j;
    knots[kDegree + G] = hi;  // exact endpoint
    for (int i = 0; i < kDegree; ++i) knots[kDegree + G + 1 + i] = hi;
}

namespace {

// Knot span k such that knots[k] <= x < knots[k+1], with the top of the
// domain mapped to the last non-degenerate span.
int span_index(double x, const SplineGrid& grid) {
    const int p = SplineGrid::kDegree;
    const int last = grid.intervals + p - 1;  // last valid span
    if (x >= grid.hi) return last;
    if (x <= grid.lo) return p;
    int k = p;
    while (k < last && !(x < grid.knots[k + 1])) ++k;
    return k;
}

}  // namespace

SplineSupport bspline_support(double x, const SplineGrid& grid) {
    const int p = SplineGrid::kDegree;
    const double xc = std::clamp(x, grid.lo, grid.hi);
    const bool frozen = (x < grid.lo) || (x > grid.hi);
    const int k = span_index(xc, grid);
    const auto& t = grid.knots;

    // Triangular scheme (de Boor): N[j] holds B_{k-deg+j,deg}(xc) as deg
    // runs from 0 to p.
    double N[4] = {1.0, 0.0, 0.0, 0.0};
    double left[4], right[4];
    for (int deg = 1; deg <= p; ++deg) {
        left[deg] = xc - t[k + 1 - deg];
        right[deg] = t[k + deg] - xc;
        double saved = 0.0;
        for (int j = 0; j < deg; ++j) {
            const double denom = right[j + 1] + left[deg - j];
            const double temp = denom != 0.0 ? N[j] / denom : 0.0;
            N[j] = saved + right[j + 1] * temp;
            saved = left[deg - j] * temp;
        }
        N[deg] = saved;
        if (deg == p - 1) {
            // Derivative of the cubic basis from the quadratic one:
            // B'_{i,3} = 3 * (B_{i,2}/(t[i+3]-t[i]) - B_{i+1,2}/(t[i+4]-t[i+1])).
            double q[3] = {N[0], N[1], N[2]};
            SplineSupport out;
            out.first = k - p;
            for (int j = 0; j < 4; ++j) {
                const int i = k - p + j;
                double d = 0.0;
                if (j >= 1) {  // B_{i,2} is q[j-1]
                    const double den = t[i + 3] - t[i];
                    if (den != 0.0) d += q[j - 1] / den;
                }
                if (j <= 2) {  // B_{i+1,2} is q[j]
                    const double den = t[i + 4] - t[i + 1];
                    if (den != 0.0) d -= q[j] / den;
                }
                out.derivs[j] = frozen ? 0.0 : 3.0 * d;
            }
            // finish the cubic values with one more sweep
            left[p] = xc - t[k + 1 - p];
            right[p] = t[k + p] - xc;
            double saved2 = 0.0;
            for (int j = 0; j < p; ++j) {
                const double denom = right[j + 1] + left[p - j];
                const double temp = denom != 0.0 ? N[j] / denom : 0.0;
                N[j] = saved2 + right[j + 1] * temp;
                saved2 = left[p - j] * temp;
            }
            N[p] = saved2;
            for (int j = 0; j < 4; ++j) out.values[j] = N[j];
            return out;
        }
    }
    // p >= 1 always, so we never get here.
    return {};
}

std::vector<double> bspline_basis(double x, const SplineGrid& grid) {
    std::vector<double> out(grid.num_basis(), 0.0);
    const SplineSupport s = bspline_support(x, grid);
    for (int j = 0; j < 4; ++j) {
        const int i = s.first + j;
        if (i >= 0 && i < grid.num_basis()) out[i] += s.values[j];
    }
    return out;
}

}  // namespace mimic::nn
