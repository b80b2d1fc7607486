#pragma once

#include <vector>

namespace mimic::nn {

// Cubic B-spline basis on an open-uniform knot vector over [lo, hi] with G
// equal intervals: G + 7 knots, G + 3 basis functions, partition of unity on
// the domain. Inputs outside the domain are evaluated at the clamped
// boundary point with zero derivative (the spline is frozen there; the silu
// half of a KAN edge stays exact everywhere).
struct SplineGrid {
    static constexpr int kDegree = 3;

    int intervals = 5;      // G
    double lo = -1.5;
    double hi = 1.5;
    std::vector<double> knots;

    SplineGrid() { rebuild(); }
    SplineGrid(int g, double lo_, double hi_) : intervals(g), lo(lo_), hi(hi_) {
        rebuild();
    }

    int num_basis() const { return intervals + kDegree; }
    void rebuild();
};

// All G+3 basis values at x (at most 4 nonzero).
std::vector<double> bspline_basis(double x, const SplineGrid& grid);

// Basis values and derivatives in one pass. `first` is the index of the
// first of the four consecutive potentially-nonzero entries; values[0..3]
// and derivs[0..3] correspond to basis functions first..first+3.
struct SplineSupport {
    int first = 0;
    double values[4] = {0, 0, 0, 0};
    double derivs[4] = {0, 0, 0, 0};
};

SplineSupport bspline_support(double x, const SplineGrid& grid);

}  // namespace mimic::nn
