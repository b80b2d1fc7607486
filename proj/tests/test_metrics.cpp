#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mimic/expert_policy.hpp"
#include "mimic/metrics.hpp"
#include "mimic/report.hpp"
#include "mimic/rng.hpp"

using namespace mimic;

namespace {

LandmarkTrajectory constant_displacement_traj(const Landmarks& base, int L,
                                              double step) {
    // every point moves straight down by step per frame
    LandmarkTrajectory t;
    for (int k = 0; k < L; ++k) {
        Landmarks f = base;
        for (auto& p : f) p.y += step * k;
        t.push_back(f);
    }
    return t;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("ced basics") {
    CHECK(ced_fraction({0.1, 0.3}, 0.2) == 0.5);
    CHECK_THROWS_AS(ced_curve({}), ArgumentError);

    const CedCurve zero = ced_curve(std::vector<double>(10, 0.0));
    for (double f : zero.fractions) CHECK(f == 1.0);

    SplitMix64 rng(5);
    std::vector<double> errors(100);
    for (double& e : errors) e = rng.next_double();
    const CedCurve c = ced_curve(errors);
    CHECK(c.thresholds.size() == kCedGridSize);
    CHECK(c.fractions.back() == 1.0);
    for (std::size_t i = 1; i < c.fractions.size(); ++i)
        CHECK(c.fractions[i] >= c.fractions[i - 1]);
}

TEST_CASE("ced area grows when every error shrinks") {
    SplitMix64 rng(21);
    std::vector<double> errors(200), smaller(200);
    for (std::size_t i = 0; i < errors.size(); ++i) {
        errors[i] = 0.01 + rng.next_double();
        smaller[i] = errors[i] * 0.5;
    }
    // shared grid so the areas are comparable
    const double mx = *std::max_element(errors.begin(), errors.end());
    std::vector<double> grid(kCedGridSize);
    for (int i = 0; i < kCedGridSize; ++i)
        grid[i] = mx * static_cast<double>(i) / (kCedGridSize - 1);
    const CedCurve a = ced_curve_on_grid(errors, grid);
    const CedCurve b = ced_curve_on_grid(smaller, grid);
    double area_a = 0.0, area_b = 0.0;
    for (int i = 0; i < kCedGridSize; ++i) {
        area_a += a.fractions[i];
        area_b += b.fractions[i];
    }
    CHECK(area_b > area_a);
    for (int i = 0; i < kCedGridSize; ++i) CHECK(b.fractions[i] >= a.fractions[i]);
}

TEST_CASE("image distance identities") {
    Image a = Image::filled(32, 24, 100, 150, 200);
    CHECK(image_distance(a, a) == 1.0);

    Image b = a;
    b.set_pixel(5, 5, 0, 0, 0);
    b.set_pixel(6, 6, 255, 255, 255);
    const double d = image_distance(a, b);
    CHECK(d < 1.0);
    CHECK(image_distance(a, b) == doctest::Approx(image_distance(b, a)).epsilon(1e-12));

    Image c = Image::filled(16, 24, 0, 0, 0);
    CHECK_THROWS_AS(image_distance(a, c), DimensionError);

    CHECK(pixel_distance(a, a) == 0.0);
    CHECK(pixel_distance(a, b) > 0.0);
}

TEST_CASE("landmark distance") {
    Landmarks a(kNumLandmarks);
    SplitMix64 rng(3);
    for (auto& p : a) p = {rng.next_double(), rng.next_double()};
    CHECK(landmark_distance(a, a) == 0.0);

    Landmarks b = a;
    for (auto& p : b) p.x += 0.1;
    CHECK(landmark_distance(a, b) == doctest::Approx(0.1).epsilon(1e-12));

    // brute-force oracle
    Landmarks c(kNumLandmarks);
    for (auto& p : c) p = {rng.next_double(), rng.next_double()};
    double ref = 0.0;
    for (int i = 0; i < kNumLandmarks; ++i)
        ref += std::sqrt((a[i].x - c[i].x) * (a[i].x - c[i].x) +
                         (a[i].y - c[i].y) * (a[i].y - c[i].y));
    ref /= kNumLandmarks;
    CHECK(std::abs(landmark_distance(a, c) - ref) < 1e-12);

    CHECK_THROWS_AS(landmark_distance(a, Landmarks(10)), DimensionError);

    // triangle inequality on random triples
    for (int n = 0; n < 100; ++n) {
        Landmarks x(kNumLandmarks), y(kNumLandmarks), z(kNumLandmarks);
        for (int i = 0; i < kNumLandmarks; ++i) {
            x[i] = {rng.next_double(), rng.next_double()};
            y[i] = {rng.next_double(), rng.next_double()};
            z[i] = {rng.next_double(), rng.next_double()};
        }
        CHECK(landmark_distance(x, z) <=
              landmark_distance(x, y) + landmark_distance(y, z) + 1e-9);
    }
}

TEST_CASE("space similarity") {
    Landmarks base(kNumLandmarks);
    SplitMix64 rng(9);
    for (auto& p : base) p = {0.2 + 0.6 * rng.next_double(), 0.2 + 0.3 * rng.next_double()};

    SeqParams p;
    const auto human = constant_displacement_traj(base, 30, 0.002);
    CHECK(space_similarity(human, human, p) == 1.0);

    // identical displacement profiles from different anchors still score 1
    Landmarks shifted = base;
    for (auto& pt : shifted) pt.x += 0.05;
    const auto robot = constant_displacement_traj(shifted, 30, 0.002);
    CHECK(space_similarity(human, robot, p) == doctest::Approx(1.0).epsilon(1e-12));

    // known displacement gap x per frame k>0: each term e^{-x^2/b}
    const double gap = 0.003;
    const auto fast2 = constant_displacement_traj(base, 2, 0.004);
    const auto slower = constant_displacement_traj(base, 2, 0.004 - gap);
    const double expected = (1.0 + std::exp(-gap * gap / p.b_s)) / 2.0;
    CHECK(space_similarity(fast2, slower, p) == doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(space_similarity(human, fast2, p), DimensionError);
}

TEST_CASE("time similarity") {
    Landmarks base(kNumLandmarks);
    SplitMix64 rng(13);
    for (auto& p : base) p = {0.3 + 0.4 * rng.next_double(), 0.3 + 0.3 * rng.next_double()};
    SeqParams p;

    const auto human = constant_displacement_traj(base, 30, 0.003);
    CHECK(time_similarity(human, human, p) == 1.0);

    // time-reversed non-symmetric motion scores below 1
    LandmarkTrajectory ramp;
    for (int k = 0; k < 30; ++k) {
        Landmarks f = base;
        const double d = 0.03 * (k / 29.0) * (k / 29.0);  // accelerating
        for (auto& pt : f) pt.y += d;
        ramp.push_back(f);
    }
    LandmarkTrajectory reversed(ramp.rbegin(), ramp.rend());
    CHECK(time_similarity(ramp, reversed, p) < 1.0);

    LandmarkTrajectory single = {base};
    CHECK_THROWS_AS(time_similarity(single, single, p), ArgumentError);
}

TEST_CASE("movement smoothness") {
    SeqParams p;
    const int L = 30;

    Trajectory constant;
    constant.frames.assign(L, ServoFrame(kNumServos, 0.4));
    CHECK(movement_smoothness(constant, p) == 1.0);

    Trajectory ramp;
    for (int k = 0; k < L; ++k)
        ramp.frames.push_back(ServoFrame(kNumServos, 0.02 * k));
    CHECK(movement_smoothness(ramp, p) == 1.0);

    // one injected hop of 2*T_D on one channel
    Trajectory hop;
    hop.frames.assign(L, ServoFrame(kNumServos, 0.1));
    for (int k = 15; k < L; ++k) hop.frames[k][7] = 0.1 + 2.0 * p.t_d;
    const double expected = 1.0 - 1.0 / (static_cast<double>(L) * kNumServos);
    CHECK(movement_smoothness(hop, p) == doctest::Approx(expected).epsilon(1e-15));

    // uncoordinated random commands keep growing their deltas: visibly jerky
    Trajectory jerky;
    SplitMix64 rng(44);
    for (int k = 0; k < L; ++k) {
        ServoFrame f(kNumServos);
        for (double& v : f) v = rng.next_double();
        jerky.frames.push_back(std::move(f));
    }
    CHECK(movement_smoothness(jerky, p) < 0.95);

    Trajectory tiny;
    tiny.frames.assign(2, ServoFrame(kNumServos, 0.0));
    CHECK_THROWS_AS(movement_smoothness(tiny, p), ArgumentError);
}

TEST_CASE("expert trajectories are hop-free under the default detector") {
    const ServoLayout lay = make_default_layout();
    PolicyConfig cfg;
    cfg.base_seed = 515;
    SeqParams p;
    for (int i = 0; i < 20; ++i) {
        const Trajectory t = sample_trajectory(cfg, i, 30, lay);
        CHECK(movement_smoothness(t, p) == 1.0);
    }
}

TEST_CASE("report writers") {
    std::vector<EpochStats> hist = {{0, 0.5, 0.6, 0.55}, {1, 0.4, 0.5, 0.45}};
    const std::string csv = loss_history_csv(hist);
    CHECK(csv.find("epoch,train_loss,test_loss,test_mse") == 0);
    CHECK(csv.find("\n0,") != std::string::npos);

    SummaryReport s;
    s.samples = 10;
    s.gs = 0.9;
    s.gt = 0.8;
    s.gd = 1.0;
    const std::string sum = summary_csv(s);
    CHECK(sum.find(",gs,gt,gd") != std::string::npos);

    std::vector<double> errors = {0.1, 0.2, 0.3};
    const CedCurve c = ced_curve(errors);
    const std::string svg = ced_svg({{"model", c}});
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    const std::string ccsv = ced_csv({{"model", c}});
    CHECK(ccsv.find("threshold,model") == 0);
}

TEST_SUITE_END();
