#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mimic/image.hpp"
#include "mimic/servo_layout.hpp"

namespace mimic {

inline constexpr int kNumCoeffs = 52;
inline constexpr int kNumPose = 3;
inline constexpr int kNumFeatures = kNumCoeffs + kNumPose;  // model input width
inline constexpr int kNumLandmarks = 63;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

using Landmarks = std::vector<Point2>;  // exactly 63 points in [0,1]^2

// 52 blendshape coefficients followed by 3 normalized head-pose values
// (yaw, pitch, roll), all in [0,1].
struct FeatureVector {
    std::vector<double> values;

    FeatureVector() : values(kNumFeatures, 0.0) {}
    explicit FeatureVector(std::vector<double> v) : values(std::move(v)) {}

    double coeff(int i) const { return values[i]; }
    double pose(int i) const { return values[kNumCoeffs + i]; }
    double& coeff(int i) { return values[i]; }
    double& pose(int i) { return values[kNumCoeffs + i]; }

    void validate() const;
};

// Canonical blendshape coefficient names, fixing the coefficient order.
const std::array<std::string, kNumCoeffs>& blendshape_names();

// Neutral landmark shape plus one delta shape per blendshape coefficient.
// Procedurally generated from a fixed template; byte-stable.
struct BlendBasis {
    Landmarks neutral;                    // 63 points
    std::vector<Landmarks> deltas;        // 52 shapes of 63 displacement vectors

    void validate() const;
};

BlendBasis make_default_basis();

std::string basis_to_text(const BlendBasis& basis);
BlendBasis basis_from_text(const std::string& text);
void save_basis(const BlendBasis& basis, const std::string& path);
BlendBasis load_basis(const std::string& path);

// Deterministic stand-in for robot + camera + feature extractor: a smooth,
// saturating, block-sparse map from servo frames to feature vectors.
struct FaceSim {
    struct MapEntry {
        int servo = 0;
        double weight = 0.0;
    };

    std::uint64_t seed = 0;
    double noise_sigma = 0.0;
    std::array<std::vector<MapEntry>, kNumCoeffs> coeff_map;  // dominant + cross terms
    std::array<double, kNumCoeffs> rest{};
    std::array<double, kNumCoeffs> span{};

    static FaceSim make(std::uint64_t seed, double noise_sigma);

    // First coefficient whose dominant entry drives `servo_index`; -1 if none.
    int primary_feature_of_servo(int servo_index) const;
};

inline constexpr double kDefaultTrainNoiseSigma = 0.005;

FeatureVector servo_to_features(const FaceSim& sim, const ServoFrame& frame);

// Seeded zero-mean Gaussian jitter, clamped back into [0,1]. sigma = 0 is
// the identity.
FeatureVector add_observation_noise(const FeatureVector& fv, double sigma,
                                    std::uint64_t seed);

// Eq.-style linear blend of delta shapes onto the neutral shape, followed by
// a rigid yaw rotation (up to +/-15 degrees) about the composed centroid.
Landmarks compose_landmarks(const FeatureVector& fv, const BlendBasis& basis);

// Seeded per-point jitter for landmark observations, clamped to [0,1]^2.
Landmarks add_landmark_noise(const Landmarks& lm, double sigma, std::uint64_t seed);

// Deterministic rasterization of the facial polylines at 640x480 RGB.
Image render_image(const Landmarks& landmarks);

}  // namespace mimic
