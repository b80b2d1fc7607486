#pragma once

#include <cmath>
#include <vector>

#include "mimic/errors.hpp"

namespace mimic::nn {

inline double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline double logistic_deriv(double x) {
    const double s = logistic(x);
    return s * (1.0 - s);
}

// silu(x) = x * logistic(x)
inline double silu(double x) {
    return x * logistic(x);
}

inline double silu_deriv(double x) {
    const double s = logistic(x);
    return s * (1.0 + x * (1.0 - s));
}

// In-place row softmax with max subtraction.
inline void softmax_row(double* row, int n) {
    double mx = row[0];
    for (int i = 1; i < n; ++i) mx = std::max(mx, row[i]);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        row[i] = std::exp(row[i] - mx);
        sum += row[i];
    }
    for (int i = 0; i < n; ++i) row[i] /= sum;
}

}  // namespace mimic::nn
