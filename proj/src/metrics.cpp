#include "mimic/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "mimic/errors.hpp"

namespace mimic {

double ced_fraction(const std::vector<double>& errors, double t) {
    if (errors.empty()) throw ArgumentError("ced: empty error list");
    std::size_t n = 0;
    for (double e : errors)
        if (e <= t) ++n;
    return static_cast<double>(n) / static_cast<double>(errors.size());
}

CedCurve ced_curve(const std::vector<double>& errors) {
    if (errors.empty()) throw ArgumentError("ced: empty error list");
    const double mx = *std::max_element(errors.begin(), errors.end());
    std::vector<double> grid(kCedGridSize);
    for (int i = 0; i < kCedGridSize; ++i)
        grid[i] = mx * static_cast<double>(i) / (kCedGridSize - 1);
    return ced_curve_on_grid(errors, grid);
}

CedCurve ced_curve_on_grid(const std::vector<double>& errors,
                           const std::vector<double>& grid) {
    if (errors.empty()) throw ArgumentError("ced: empty error list");
    CedCurve c;
    c.thresholds = grid;
    c.fractions.reserve(grid.size());
    for (double t : grid) c.fractions.push_back(ced_fraction(errors, t));
    return c;
}

namespace {

struct ChannelStats {
    double mean_x = 0.0, mean_y = 0.0;
    double var_x = 0.0, var_y = 0.0, cov = 0.0;
};

ChannelStats channel_stats(const Image& x, const Image& y, int c) {
    ChannelStats s;
    const std::size_t n = static_cast<std::size_t>(x.width) * x.height;
    for (std::size_t i = 0; i < n; ++i) {
        s.mean_x += x.rgb[i * 3 + c];
        s.mean_y += y.rgb[i * 3 + c];
    }
    s.mean_x /= 255.0 * n;
    s.mean_y /= 255.0 * n;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x.rgb[i * 3 + c] / 255.0 - s.mean_x;
        const double dy = y.rgb[i * 3 + c] / 255.0 - s.mean_y;
        s.var_x += dx * dx;
        s.var_y += dy * dy;
        s.cov += dx * dy;
    }
    s.var_x /= n;
    s.var_y /= n;
    s.cov /= n;
    return s;
}

}  // namespace

double image_distance(const Image& x, const Image& y) {
    if (x.width != y.width || x.height != y.height)
        throw DimensionError("image_distance: image dimensions differ");
    if (x.width <= 0 || x.height <= 0)
        throw ArgumentError("image_distance: empty image");
    constexpr double C1 = 0.01, C2 = 0.03;
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        const ChannelStats s = channel_stats(x, y, c);
        const double num = (2.0 * s.mean_x * s.mean_y + C1) * (2.0 * s.cov + C2);
        const double den =
            (s.mean_x * s.mean_x + s.mean_y * s.mean_y + C1) * (s.var_x + s.var_y + C2);
        total += num / den;
    }
    return total / 3.0;
}

double pixel_distance(const Image& x, const Image& y) {
    if (x.width != y.width || x.height != y.height)
        throw DimensionError("pixel_distance: image dimensions differ");
    double total = 0.0;
    for (std::size_t i = 0; i < x.rgb.size(); ++i)
        total += std::abs(static_cast<double>(x.rgb[i]) - y.rgb[i]);
    return total / (255.0 * x.rgb.size());
}

double landmark_distance(const Landmarks& a, const Landmarks& b) {
    if (a.size() != static_cast<std::size_t>(kNumLandmarks) || a.size() != b.size())
        throw DimensionError("landmark_distance: need two sets of 63 points");
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        total += std::hypot(a[i].x - b[i].x, a[i].y - b[i].y);
    return total / static_cast<double>(a.size());
}

namespace {

inline double similarity_kernel(double x, double b) {
    return std::exp(-x * x / b);
}

void check_lm_trajs(const LandmarkTrajectory& h, const LandmarkTrajectory& r,
                    std::size_t min_len) {
    if (h.size() != r.size())
        throw DimensionError("sequential metric: trajectory lengths differ");
    if (h.size() < min_len)
        throw ArgumentError("sequential metric: trajectory too short");
    for (const auto& f : h)
        if (f.size() != static_cast<std::size_t>(kNumLandmarks))
            throw DimensionError("sequential metric: frame is not 63 landmarks");
    for (const auto& f : r)
        if (f.size() != static_cast<std::size_t>(kNumLandmarks))
            throw DimensionError("sequential metric: frame is not 63 landmarks");
}

// Displacement of point i at frame k from its position at frame 0.
inline double displacement(const LandmarkTrajectory& t, std::size_t k, int i) {
    return std::hypot(t[k][i].x - t[0][i].x, t[k][i].y - t[0][i].y);
}

}  // namespace

double space_similarity(const LandmarkTrajectory& human, const LandmarkTrajectory& robot,
                        const SeqParams& p) {
    check_lm_trajs(human, robot, 1);
    const std::size_t L = human.size();
    double total = 0.0;
    for (int i = 0; i < kNumLandmarks; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < L; ++k)
            acc += similarity_kernel(displacement(human, k, i) - displacement(robot, k, i),
                                     p.b_s);
        total += acc / static_cast<double>(L);
    }
    return total / kNumLandmarks;
}

double time_similarity(const LandmarkTrajectory& human, const LandmarkTrajectory& robot,
                       const SeqParams& p) {
    check_lm_trajs(human, robot, 2);
    const std::size_t L = human.size();
    double total = 0.0;
    for (int i = 0; i < kNumLandmarks; ++i) {
        double acc = 0.0;
        for (std::size_t k = 1; k < L; ++k) {
            const double inc_h = displacement(human, k, i) - displacement(human, k - 1, i);
            const double inc_r = displacement(robot, k, i) - displacement(robot, k - 1, i);
            acc += similarity_kernel(inc_h - inc_r, p.b_t);
        }
        total += acc / static_cast<double>(L - 1);
    }
    return total / kNumLandmarks;
}

double movement_smoothness(const Trajectory& servo_traj, const SeqParams& p) {
    servo_traj.validate();
    const std::size_t L = servo_traj.length();
    if (L < 3)
        throw ArgumentError("movement smoothness needs at least 3 frames");
    const std::size_t m = servo_traj.dim();
    if (m != static_cast<std::size_t>(kNumServos))
        throw DimensionError("movement smoothness expects 25-channel servo frames");

    std::size_t hops = 0;
    for (std::size_t k = 2; k < L; ++k) {
        const auto& f0 = servo_traj.frames[k - 2];
        const auto& f1 = servo_traj.frames[k - 1];
        const auto& f2 = servo_traj.frames[k];
        for (std::size_t j = 0; j < m; ++j) {
            const double d1 = std::abs(f2[j] - f1[j]);
            const double d0 = std::abs(f1[j] - f0[j]);
            if (d1 - d0 > p.t_d) ++hops;
        }
    }
    return 1.0 - static_cast<double>(hops) / (static_cast<double>(L) * m);
}

}  // namespace mimic
