#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "mimic/expert_policy.hpp"
#include "mimic/face_sim.hpp"
#include "mimic/metrics.hpp"
#include "mimic/rng.hpp"
#include "mimic/text_io.hpp"

using namespace mimic;

TEST_SUITE_BEGIN("face_sim");

TEST_CASE("neutral frame maps to the rest features") {
    const FaceSim sim = FaceSim::make(101, 0.0);
    const FeatureVector fv = servo_to_features(sim, ServoFrame(25, 0.0));
    for (int j = 0; j < kNumCoeffs; ++j) CHECK(fv.coeff(j) == sim.rest[j]);
    CHECK(fv.pose(0) == 0.5);
    CHECK(fv.pose(1) == 0.5);
    CHECK(fv.pose(2) == 0.5);
}

TEST_CASE("servo_to_features is deterministic and in range") {
    const FaceSim sim = FaceSim::make(2222, 0.0);
    SplitMix64 rng(1);
    for (int n = 0; n < 10000; ++n) {
        ServoFrame f(25);
        for (double& v : f) v = rng.next_double();
        const FeatureVector a = servo_to_features(sim, f);
        for (double v : a.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        if (n < 50) CHECK(a.values == servo_to_features(sim, f).values);
    }
    CHECK_THROWS_AS(servo_to_features(sim, ServoFrame(7, 0.0)), DimensionError);
}

TEST_CASE("dominant coefficient responds monotonically") {
    const FaceSim sim = FaceSim::make(404, 0.0);
    const int feat = sim.primary_feature_of_servo(servo::kBrowRaiseL);
    REQUIRE(feat >= 0);
    ServoFrame f(25, 0.0);
    double prev = -1.0;
    for (int g = 0; g <= 100; ++g) {
        f[servo::kBrowRaiseL] = g / 100.0;
        const double c = servo_to_features(sim, f).coeff(feat);
        CHECK(c > prev);
        prev = c;
    }
}

TEST_CASE("feature map is Lipschitz at desk scale") {
    const FaceSim sim = FaceSim::make(5150, 0.0);
    SplitMix64 rng(2);
    double worst = 0.0;
    for (int n = 0; n < 2000; ++n) {
        ServoFrame a(25), b(25);
        for (int c = 0; c < 25; ++c) a[c] = rng.next_double();
        for (int c = 0; c < 25; ++c) b[c] = rng.next_double();
        const FeatureVector fa = servo_to_features(sim, a);
        const FeatureVector fb = servo_to_features(sim, b);
        double din = 0.0, dout = 0.0;
        for (int c = 0; c < 25; ++c) din = std::max(din, std::abs(a[c] - b[c]));
        for (int j = 0; j < kNumFeatures; ++j)
            dout = std::max(dout, std::abs(fa.values[j] - fb.values[j]));
        if (din > 1e-9) worst = std::max(worst, dout / din);
    }
    CHECK(worst < 5.0);
}

TEST_CASE("no collapse on distinct constraint-valid frames") {
    const ServoLayout lay = make_default_layout();
    const FaceSim sim = FaceSim::make(31, 0.0);
    PolicyConfig cfg;
    cfg.base_seed = 7311;
    int checked = 0;
    for (int i = 0; checked < 1000; ++i) {
        const ServoFrame a = sample_expression(cfg, 2 * i, lay);
        const ServoFrame b = sample_expression(cfg, 2 * i + 1, lay);
        double din = 0.0;
        for (int c = 0; c < 25; ++c) din = std::max(din, std::abs(a[c] - b[c]));
        if (din <= 0.1) continue;
        ++checked;
        const FeatureVector fa = servo_to_features(sim, a);
        const FeatureVector fb = servo_to_features(sim, b);
        double dout = 0.0;
        for (int j = 0; j < kNumFeatures; ++j)
            dout += std::abs(fa.values[j] - fb.values[j]);
        CHECK(dout > 0.0);
    }
}

TEST_CASE("observation noise") {
    const FaceSim sim = FaceSim::make(11, 0.0);
    const FeatureVector fv = servo_to_features(sim, ServoFrame(25, 0.2));

    CHECK(add_observation_noise(fv, 0.0, 5).values == fv.values);
    CHECK(add_observation_noise(fv, 0.01, 5).values ==
          add_observation_noise(fv, 0.01, 5).values);
    CHECK(add_observation_noise(fv, 0.01, 5).values !=
          add_observation_noise(fv, 0.01, 6).values);
    CHECK_THROWS_AS(add_observation_noise(fv, -0.1, 5), ArgumentError);

    // Monte Carlo tail: |delta| <= 5 sigma away from the clamp boundaries
    const double sigma = 0.01;
    for (int draw = 0; draw < 1000; ++draw) {
        const FeatureVector noisy = add_observation_noise(fv, sigma, 1000 + draw);
        for (int j = 0; j < kNumFeatures; ++j) {
            const double delta = std::abs(noisy.values[j] - fv.values[j]);
            CHECK(delta <= 5.0 * sigma + 1e-12);
        }
    }
}

TEST_CASE("compose_landmarks zero weights and neutral pose give s0") {
    const BlendBasis basis = make_default_basis();
    FeatureVector fv;  // all zero coeffs
    fv.pose(0) = 0.5;
    fv.pose(1) = 0.5;
    fv.pose(2) = 0.5;
    const Landmarks lm = compose_landmarks(fv, basis);
    for (int i = 0; i < kNumLandmarks; ++i) {
        CHECK(lm[i].x == basis.neutral[i].x);
        CHECK(lm[i].y == basis.neutral[i].y);
    }
}

TEST_CASE("compose_landmarks one-hot adds exactly one delta shape") {
    const BlendBasis basis = make_default_basis();
    const int k = 24;  // jawOpen
    FeatureVector fv;
    fv.pose(0) = 0.5;
    fv.coeff(k) = 1.0;
    const Landmarks lm = compose_landmarks(fv, basis);
    for (int i = 0; i < kNumLandmarks; ++i) {
        CHECK(lm[i].x == basis.neutral[i].x + basis.deltas[k][i].x);
        CHECK(lm[i].y == basis.neutral[i].y + basis.deltas[k][i].y);
    }
}

TEST_CASE("compose_landmarks matches brute-force summation") {
    const BlendBasis basis = make_default_basis();
    SplitMix64 rng(88);
    for (int n = 0; n < 100; ++n) {
        FeatureVector fv;
        for (int j = 0; j < kNumCoeffs; ++j) fv.coeff(j) = rng.next_double();
        fv.pose(0) = 0.5;  // no rotation so the oracle stays a plain sum
        const Landmarks lm = compose_landmarks(fv, basis);
        for (int i = 0; i < kNumLandmarks; ++i) {
            double x = basis.neutral[i].x, y = basis.neutral[i].y;
            for (int s = 0; s < kNumCoeffs; ++s) {
                x += fv.coeff(s) * basis.deltas[s][i].x;
                y += fv.coeff(s) * basis.deltas[s][i].y;
            }
            CHECK(std::abs(lm[i].x - x) < 1e-12);
            CHECK(std::abs(lm[i].y - y) < 1e-12);
        }
    }
}

TEST_CASE("composed landmarks stay inside the unit square") {
    const BlendBasis basis = make_default_basis();
    SplitMix64 rng(3);
    // random blends, the all-ones corner, and extreme poses
    for (int n = 0; n < 500; ++n) {
        FeatureVector fv;
        for (int j = 0; j < kNumCoeffs; ++j)
            fv.coeff(j) = (n == 0) ? 1.0 : rng.next_double();
        fv.pose(0) = (n % 3 == 0) ? 0.0 : ((n % 3 == 1) ? 1.0 : rng.next_double());
        const Landmarks lm = compose_landmarks(fv, basis);
        for (const auto& p : lm) {
            CHECK(p.x >= 0.0);
            CHECK(p.x <= 1.0);
            CHECK(p.y >= 0.0);
            CHECK(p.y <= 1.0);
        }
    }
}

TEST_CASE("pose rotates the composed shape") {
    const BlendBasis basis = make_default_basis();
    FeatureVector fv;
    fv.pose(0) = 1.0;  // +15 degrees
    const Landmarks rot = compose_landmarks(fv, basis);
    double moved = 0.0;
    for (int i = 0; i < kNumLandmarks; ++i)
        moved = std::max(moved, std::hypot(rot[i].x - basis.neutral[i].x,
                                           rot[i].y - basis.neutral[i].y));
    CHECK(moved > 0.01);
}

TEST_CASE("blend basis text round trip and shipped file") {
    const BlendBasis basis = make_default_basis();
    const std::string text = basis_to_text(basis);
    const BlendBasis back = basis_from_text(text);
    CHECK(basis_to_text(back) == text);

    CHECK_THROWS_AS(basis_from_text("blend-basis 9\n"), FormatError);
    CHECK_THROWS_AS(basis_from_text(text.substr(0, text.size() / 2)), FormatError);

    // the file shipped in data/ is exactly the procedural basis
    const char* root = std::getenv("MIMIC_SOURCE_DIR");
    if (root) {
        const std::string shipped = read_file(std::string(root) + "/data/blend_basis.txt");
        CHECK(shipped == text);
    }
}

TEST_CASE("render determinism and landmark validation") {
    const BlendBasis basis = make_default_basis();
    FeatureVector fv;
    fv.pose(0) = 0.5;
    const Landmarks lm = compose_landmarks(fv, basis);
    const Image a = render_image(lm);
    const Image b = render_image(lm);
    CHECK(a.rgb == b.rgb);
    CHECK(a.width == 640);
    CHECK(a.height == 480);
    CHECK(a.rgb.size() == 640u * 480u * 3u);

    Landmarks bad = lm;
    bad[0].x = 1.5;
    CHECK_THROWS_AS(render_image(bad), ArgumentError);
    CHECK_THROWS_AS(render_image(Landmarks(10)), DimensionError);
}

TEST_CASE("rendered identical faces have similarity 1, distinct below 1") {
    const BlendBasis basis = make_default_basis();
    FeatureVector neutral;
    neutral.pose(0) = 0.5;
    FeatureVector smile;
    smile.pose(0) = 0.5;
    smile.coeff(43) = 0.9;  // mouthSmileLeft
    smile.coeff(44) = 0.9;  // mouthSmileRight
    smile.coeff(24) = 0.7;  // jawOpen

    const Image a = render_image(compose_landmarks(neutral, basis));
    const Image b = render_image(compose_landmarks(smile, basis));
    CHECK(image_distance(a, a) == 1.0);
    CHECK(image_distance(a, b) < 1.0);
    CHECK(image_distance(a, b) > 0.0);
}

TEST_CASE("ppm round trip") {
    const BlendBasis basis = make_default_basis();
    FeatureVector fv;
    fv.pose(0) = 0.5;
    const Image img = render_image(compose_landmarks(fv, basis));
    const std::string path = "render_test.ppm";
    write_ppm(img, path);
    const Image back = read_ppm(path);
    CHECK(back.rgb == img.rgb);
    std::remove(path.c_str());
}

TEST_SUITE_END();
