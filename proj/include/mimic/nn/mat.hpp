#pragma once

#include <string>
#include <vector>

#include "mimic/errors.hpp"
#include "mimic/rng.hpp"

namespace mimic::nn {

// Minimal row-major double matrix; all model parameters and activations in
// this project are held in these (or plain vectors).
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> d;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), d(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return d[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const {
        return d[static_cast<std::size_t>(r) * cols + c];
    }

    std::size_t size() const { return d.size(); }
    void fill(double v) {
        for (double& x : d) x = v;
    }

    static Mat constant(int r, int c, double v) {
        Mat m(r, c);
        m.fill(v);
        return m;
    }

    static Mat gaussian(int r, int c, double mean, double sigma, SplitMix64& rng) {
        Mat m(r, c);
        for (double& x : m.d) x = mean + sigma * rng.gaussian();
        return m;
    }

    // identity + N(0, sigma^2); square only.
    static Mat near_identity(int n, double sigma, SplitMix64& rng) {
        Mat m = gaussian(n, n, 0.0, sigma, rng);
        for (int i = 0; i < n; ++i) m(i, i) += 1.0;
        return m;
    }
};

inline void require_shape(const Mat& m, int rows, int cols, const std::string& what) {
    if (m.rows != rows || m.cols != cols)
        throw DimensionError(what + ": expected " + std::to_string(rows) + "x" +
                             std::to_string(cols) + ", got " + std::to_string(m.rows) +
                             "x" + std::to_string(m.cols));
}

}  // namespace mimic::nn
