#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace mimic::nn {

// Max relative error between an analytic gradient and central finite
// differences of a scalar function, perturbing one coordinate at a time.
// The relative-error denominator is floored at 1e-5: below that magnitude
// the central difference itself carries ~1e-11 of cancellation noise, which
// would otherwise read as a fake relative error near the 1e-4 tolerance.
inline double grad_check(const std::function<double(const std::vector<double>&)>& fn,
                         std::vector<double> inputs,
                         const std::vector<double>& analytic_grad, double eps) {
    double worst = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const double orig = inputs[i];
        inputs[i] = orig + eps;
        const double fp = fn(inputs);
        inputs[i] = orig - eps;
        const double fm = fn(inputs);
        inputs[i] = orig;
        const double fd = (fp - fm) / (2.0 * eps);
        const double a = analytic_grad[i];
        const double denom = std::max({std::abs(fd), std::abs(a), 1e-5});
        worst = std::max(worst, std::abs(fd - a) / denom);
    }
    return worst;
}

}  // namespace mimic::nn
