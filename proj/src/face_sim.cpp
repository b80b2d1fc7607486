#include "mimic/face_sim.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mimic/errors.hpp"
#include "mimic/rng.hpp"
#include "mimic/text_io.hpp"

namespace mimic {

void FeatureVector::validate() const {
    if (values.size() != static_cast<std::size_t>(kNumFeatures))
        throw DimensionError("feature vector must have 55 values, got " +
                             std::to_string(values.size()));
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0))
            throw ArgumentError("feature value out of [0,1]: " + format_double(v));
}

const std::array<std::string, kNumCoeffs>& blendshape_names() {
    static const std::array<std::string, kNumCoeffs> names = {
        "browDownLeft",     "browDownRight",    "browInnerUp",      "browOuterUpLeft",
        "browOuterUpRight", "cheekPuff",        "cheekSquintLeft",  "cheekSquintRight",
        "eyeBlinkLeft",     "eyeBlinkRight",    "eyeLookDownLeft",  "eyeLookDownRight",
        "eyeLookInLeft",    "eyeLookInRight",   "eyeLookOutLeft",   "eyeLookOutRight",
        "eyeLookUpLeft",    "eyeLookUpRight",   "eyeSquintLeft",    "eyeSquintRight",
        "eyeWideLeft",      "eyeWideRight",     "jawForward",       "jawLeft",
        "jawOpen",          "jawRight",         "mouthClose",       "mouthDimpleLeft",
        "mouthDimpleRight", "mouthFrownLeft",   "mouthFrownRight",  "mouthFunnel",
        "mouthLeft",        "mouthLowerDownLeft", "mouthLowerDownRight", "mouthPressLeft",
        "mouthPressRight",  "mouthPucker",      "mouthRight",       "mouthRollLower",
        "mouthRollUpper",   "mouthShrugLower",  "mouthShrugUpper",  "mouthSmileLeft",
        "mouthSmileRight",  "mouthStretchLeft", "mouthStretchRight", "mouthUpperUpLeft",
        "mouthUpperUpRight", "noseSneerLeft",   "noseSneerRight",   "tongueOut"};
    return names;
}

void BlendBasis::validate() const {
    if (neutral.size() != static_cast<std::size_t>(kNumLandmarks))
        throw DimensionError("basis neutral shape must have 63 points");
    if (deltas.size() != static_cast<std::size_t>(kNumCoeffs))
        throw DimensionError("basis must have 52 delta shapes");
    for (const auto& d : deltas)
        if (d.size() != static_cast<std::size_t>(kNumLandmarks))
            throw DimensionError("each delta shape must have 63 points");
    for (const auto& p : neutral)
        if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
            throw ArgumentError("neutral landmark outside [0,1]^2");
}

// ---------------------------------------------------------------------------
// Template face and delta shapes.
//
// Landmark groups (63 points total):
//   0-12   face outline (right cheek -> chin -> left cheek)
//   13-17  left brow (left to right; 17 is the inner end)
//   18-22  right brow (left to right; 18 is the inner end)
//   23-28  left eye hexagon, 29-34 right eye hexagon
//   35-38  nose bridge, 39-42 nose base
//   43-54  outer lip ellipse (43 left corner, 49 right corner)
//   55-62  inner lip ellipse (55 left corner, 59 right corner)
//
// The whole template fits in a disc of radius 0.30 around (0.5, 0.48) and
// each landmark's summed delta magnitude is capped at 0.06, so any blend in
// [0,1]^52 rotated by up to 15 degrees stays inside [0,1]^2.
// ---------------------------------------------------------------------------

namespace {

constexpr double kFaceCx = 0.5;
constexpr double kFaceCy = 0.48;
constexpr double kLipCx = 0.5;
constexpr double kLipCy = 0.68;
constexpr double kPerLandmarkDeltaBudget = 0.06;
constexpr double kMaxYawRadians = 15.0 * M_PI / 180.0;

Landmarks make_template() {
    Landmarks p;
    p.reserve(kNumLandmarks);
    // 0-12 outline
    for (int j = 0; j <= 12; ++j) {
        double th = M_PI * j / 12.0;
        p.push_back({kFaceCx + 0.26 * std::cos(th), kFaceCy + 0.30 * std::sin(th)});
    }
    // 13-17 left brow, 18-22 right brow
    const double brow_y[5] = {0.330, 0.318, 0.312, 0.318, 0.330};
    for (int j = 0; j < 5; ++j) p.push_back({0.30 + 0.035 * j, brow_y[j]});
    for (int j = 0; j < 5; ++j) p.push_back({0.56 + 0.035 * j, brow_y[4 - j]});
    // 23-28 left eye, 29-34 right eye
    p.push_back({0.300, 0.400});
    p.push_back({0.335, 0.385});
    p.push_back({0.405, 0.385});
    p.push_back({0.440, 0.400});
    p.push_back({0.405, 0.415});
    p.push_back({0.335, 0.415});
    p.push_back({0.560, 0.400});
    p.push_back({0.595, 0.385});
    p.push_back({0.665, 0.385});
    p.push_back({0.700, 0.400});
    p.push_back({0.665, 0.415});
    p.push_back({0.595, 0.415});
    // 35-42 nose
    p.push_back({0.500, 0.400});
    p.push_back({0.500, 0.450});
    p.push_back({0.500, 0.500});
    p.push_back({0.500, 0.545});
    p.push_back({0.450, 0.565});
    p.push_back({0.475, 0.578});
    p.push_back({0.525, 0.578});
    p.push_back({0.550, 0.565});
    // 43-54 outer lip, 55-62 inner lip
    for (int j = 0; j < 12; ++j) {
        double th = M_PI + 2.0 * M_PI * j / 12.0;
        p.push_back({kLipCx + 0.115 * std::cos(th), kLipCy + 0.045 * std::sin(th)});
    }
    for (int j = 0; j < 8; ++j) {
        double th = M_PI + 2.0 * M_PI * j / 8.0;
        p.push_back({kLipCx + 0.075 * std::cos(th), kLipCy + 0.018 * std::sin(th)});
    }
    return p;
}

struct ShapeBuilder {
    Landmarks shape = Landmarks(kNumLandmarks);

    void add(int idx, double dx, double dy) {
        shape[idx].x += dx;
        shape[idx].y += dy;
    }
    void add_range(int lo, int hi, double dx, double dy) {
        for (int i = lo; i <= hi; ++i) add(i, dx, dy);
    }
    // Displacement toward (scale < 0) or away from (scale > 0) a center.
    void add_radial(int lo, int hi, const Landmarks& ref, double cx, double cy,
                    double scale) {
        for (int i = lo; i <= hi; ++i)
            add(i, (ref[i].x - cx) * scale, (ref[i].y - cy) * scale);
    }
};

std::vector<Landmarks> make_deltas(const Landmarks& t) {
    std::vector<Landmarks> deltas;
    deltas.reserve(kNumCoeffs);
    auto emit = [&](const ShapeBuilder& b) { deltas.push_back(b.shape); };

    ShapeBuilder b;
    // 0 browDownLeft
    b = {};
    b.add_range(13, 17, 0.0, 0.016);
    b.add(17, 0.0, 0.004);
    emit(b);
    // 1 browDownRight
    b = {};
    b.add_range(18, 22, 0.0, 0.016);
    b.add(18, 0.0, 0.004);
    emit(b);
    // 2 browInnerUp
    b = {};
    b.add(16, 0.0, -0.010);
    b.add(17, 0.0, -0.014);
    b.add(18, 0.0, -0.014);
    b.add(19, 0.0, -0.010);
    emit(b);
    // 3 browOuterUpLeft
    b = {};
    b.add(13, 0.0, -0.016);
    b.add(14, 0.0, -0.016);
    b.add(15, 0.0, -0.010);
    emit(b);
    // 4 browOuterUpRight
    b = {};
    b.add(20, 0.0, -0.010);
    b.add(21, 0.0, -0.016);
    b.add(22, 0.0, -0.016);
    emit(b);
    // 5 cheekPuff
    b = {};
    b.add_range(1, 3, 0.014, 0.0);
    b.add_range(9, 11, -0.014, 0.0);
    emit(b);
    // 6 cheekSquintLeft
    b = {};
    b.add(27, 0.0, -0.007);
    b.add(28, 0.0, -0.007);
    emit(b);
    // 7 cheekSquintRight
    b = {};
    b.add(33, 0.0, -0.007);
    b.add(34, 0.0, -0.007);
    emit(b);
    // 8 eyeBlinkLeft
    b = {};
    b.add(24, 0.0, 0.013);
    b.add(25, 0.0, 0.013);
    b.add(27, 0.0, -0.004);
    b.add(28, 0.0, -0.004);
    emit(b);
    // 9 eyeBlinkRight
    b = {};
    b.add(30, 0.0, 0.013);
    b.add(31, 0.0, 0.013);
    b.add(33, 0.0, -0.004);
    b.add(34, 0.0, -0.004);
    emit(b);
    // 10 eyeLookDownLeft / 11 eyeLookDownRight
    b = {};
    b.add_range(23, 28, 0.0, 0.007);
    emit(b);
    b = {};
    b.add_range(29, 34, 0.0, 0.007);
    emit(b);
    // 12 eyeLookInLeft / 13 eyeLookInRight
    b = {};
    b.add_range(23, 28, 0.007, 0.0);
    emit(b);
    b = {};
    b.add_range(29, 34, -0.007, 0.0);
    emit(b);
    // 14 eyeLookOutLeft / 15 eyeLookOutRight
    b = {};
    b.add_range(23, 28, -0.007, 0.0);
    emit(b);
    b = {};
    b.add_range(29, 34, 0.007, 0.0);
    emit(b);
    // 16 eyeLookUpLeft / 17 eyeLookUpRight
    b = {};
    b.add_range(23, 28, 0.0, -0.007);
    emit(b);
    b = {};
    b.add_range(29, 34, 0.0, -0.007);
    emit(b);
    // 18 eyeSquintLeft / 19 eyeSquintRight
    b = {};
    b.add(24, 0.0, 0.006);
    b.add(25, 0.0, 0.006);
    b.add(27, 0.0, -0.006);
    b.add(28, 0.0, -0.006);
    emit(b);
    b = {};
    b.add(30, 0.0, 0.006);
    b.add(31, 0.0, 0.006);
    b.add(33, 0.0, -0.006);
    b.add(34, 0.0, -0.006);
    emit(b);
    // 20 eyeWideLeft / 21 eyeWideRight
    b = {};
    b.add(24, 0.0, -0.008);
    b.add(25, 0.0, -0.008);
    b.add(27, 0.0, 0.008);
    b.add(28, 0.0, 0.008);
    emit(b);
    b = {};
    b.add(30, 0.0, -0.008);
    b.add(31, 0.0, -0.008);
    b.add(33, 0.0, 0.008);
    b.add(34, 0.0, 0.008);
    emit(b);
    // 22 jawForward
    b = {};
    b.add_range(5, 7, 0.0, 0.006);
    emit(b);
    // 23 jawLeft
    b = {};
    b.add_range(5, 7, -0.014, 0.0);
    b.add_range(43, 62, -0.006, 0.0);
    emit(b);
    // 24 jawOpen
    b = {};
    b.add_range(4, 8, 0.0, 0.030);
    b.add_range(50, 54, 0.0, 0.026);
    b.add_range(60, 62, 0.0, 0.022);
    b.add(43, 0.0, 0.010);
    b.add(49, 0.0, 0.010);
    b.add(55, 0.0, 0.010);
    b.add(59, 0.0, 0.010);
    b.add_range(44, 48, 0.0, 0.004);
    emit(b);
    // 25 jawRight
    b = {};
    b.add_range(5, 7, 0.014, 0.0);
    b.add_range(43, 62, 0.006, 0.0);
    emit(b);
    // 26 mouthClose
    b = {};
    for (int i = 55; i <= 62; ++i) b.add(i, 0.0, (kLipCy - t[i].y) * 0.6);
    b.add_range(50, 54, 0.0, -0.006);
    emit(b);
    // 27 mouthDimpleLeft / 28 mouthDimpleRight
    b = {};
    b.add(43, -0.010, 0.0);
    b.add(55, -0.007, 0.0);
    emit(b);
    b = {};
    b.add(49, 0.010, 0.0);
    b.add(59, 0.007, 0.0);
    emit(b);
    // 29 mouthFrownLeft / 30 mouthFrownRight
    b = {};
    b.add(43, -0.006, 0.016);
    b.add(44, 0.0, 0.008);
    b.add(54, 0.0, 0.008);
    b.add(55, 0.0, 0.010);
    emit(b);
    b = {};
    b.add(49, 0.006, 0.016);
    b.add(48, 0.0, 0.008);
    b.add(50, 0.0, 0.008);
    b.add(59, 0.0, 0.010);
    emit(b);
    // 31 mouthFunnel
    b = {};
    b.add_radial(43, 54, t, kLipCx, kLipCy, -0.15);
    b.add_radial(55, 62, t, kLipCx, kLipCy, 0.30);
    emit(b);
    // 32 mouthLeft
    b = {};
    b.add_range(43, 62, -0.012, 0.0);
    emit(b);
    // 33 mouthLowerDownLeft / 34 mouthLowerDownRight
    b = {};
    b.add_range(52, 54, 0.0, 0.012);
    b.add(61, 0.0, 0.008);
    b.add(62, 0.0, 0.008);
    emit(b);
    b = {};
    b.add_range(50, 52, 0.0, 0.012);
    b.add(60, 0.0, 0.008);
    b.add(61, 0.0, 0.008);
    emit(b);
    // 35 mouthPressLeft / 36 mouthPressRight
    b = {};
    b.add(44, 0.0, 0.006);
    b.add(45, 0.0, 0.006);
    b.add(53, 0.0, -0.006);
    b.add(54, 0.0, -0.006);
    emit(b);
    b = {};
    b.add(47, 0.0, 0.006);
    b.add(48, 0.0, 0.006);
    b.add(50, 0.0, -0.006);
    b.add(51, 0.0, -0.006);
    emit(b);
    // 37 mouthPucker
    b = {};
    b.add_radial(43, 62, t, kLipCx, kLipCy, -0.22);
    emit(b);
    // 38 mouthRight
    b = {};
    b.add_range(43, 62, 0.012, 0.0);
    emit(b);
    // 39 mouthRollLower / 40 mouthRollUpper
    b = {};
    b.add_range(50, 54, 0.0, -0.010);
    b.add_range(60, 62, 0.0, -0.006);
    emit(b);
    b = {};
    b.add_range(44, 48, 0.0, 0.010);
    b.add_range(56, 58, 0.0, 0.006);
    emit(b);
    // 41 mouthShrugLower / 42 mouthShrugUpper
    b = {};
    b.add_range(50, 54, 0.0, -0.008);
    b.add(6, 0.0, -0.004);
    emit(b);
    b = {};
    b.add_range(44, 48, 0.0, -0.008);
    b.add_range(39, 42, 0.0, -0.003);
    emit(b);
    // 43 mouthSmileLeft / 44 mouthSmileRight
    b = {};
    b.add(43, -0.012, -0.014);
    b.add(44, 0.0, -0.007);
    b.add(54, 0.0, -0.007);
    b.add(55, -0.008, -0.010);
    emit(b);
    b = {};
    b.add(49, 0.012, -0.014);
    b.add(48, 0.0, -0.007);
    b.add(50, 0.0, -0.007);
    b.add(59, 0.008, -0.010);
    emit(b);
    // 45 mouthStretchLeft / 46 mouthStretchRight
    b = {};
    b.add(43, -0.014, 0.0);
    b.add(53, -0.008, 0.0);
    b.add(54, -0.008, 0.0);
    emit(b);
    b = {};
    b.add(49, 0.014, 0.0);
    b.add(50, 0.008, 0.0);
    b.add(51, 0.008, 0.0);
    emit(b);
    // 47 mouthUpperUpLeft / 48 mouthUpperUpRight
    b = {};
    b.add(44, 0.0, -0.012);
    b.add(45, 0.0, -0.012);
    b.add(56, 0.0, -0.008);
    emit(b);
    b = {};
    b.add(47, 0.0, -0.012);
    b.add(48, 0.0, -0.012);
    b.add(58, 0.0, -0.008);
    emit(b);
    // 49 noseSneerLeft / 50 noseSneerRight
    b = {};
    b.add(39, 0.0, -0.008);
    b.add(40, 0.0, -0.008);
    b.add(44, 0.0, -0.004);
    b.add(45, 0.0, -0.004);
    emit(b);
    b = {};
    b.add(41, 0.0, -0.008);
    b.add(42, 0.0, -0.008);
    b.add(47, 0.0, -0.004);
    b.add(48, 0.0, -0.004);
    emit(b);
    // 51 tongueOut
    b = {};
    b.add_range(60, 62, 0.0, 0.012);
    b.add(52, 0.0, 0.006);
    emit(b);

    return deltas;
}

// Cap each landmark's total delta magnitude so every blend in [0,1]^52
// stays inside the rotation-safe disc.
void normalize_deltas(std::vector<Landmarks>& deltas) {
    for (int l = 0; l < kNumLandmarks; ++l) {
        double total = 0.0;
        for (const auto& shape : deltas)
            total += std::hypot(shape[l].x, shape[l].y);
        if (total > kPerLandmarkDeltaBudget) {
            double s = kPerLandmarkDeltaBudget / total;
            for (auto& shape : deltas) {
                shape[l].x *= s;
                shape[l].y *= s;
            }
        }
    }
}

}  // namespace

BlendBasis make_default_basis() {
    BlendBasis basis;
    basis.neutral = make_template();
    basis.deltas = make_deltas(basis.neutral);
    normalize_deltas(basis.deltas);
    basis.validate();
    return basis;
}

std::string basis_to_text(const BlendBasis& basis) {
    std::ostringstream out;
    out << "blend-basis 1\n";
    out << "points " << kNumLandmarks << "\n";
    out << "shapes " << kNumCoeffs << "\n";
    out << "neutral\n";
    for (const auto& p : basis.neutral)
        out << format_double(p.x) << " " << format_double(p.y) << "\n";
    for (int s = 0; s < kNumCoeffs; ++s) {
        out << "shape " << s << " " << blendshape_names()[s] << "\n";
        for (const auto& p : basis.deltas[s])
            out << format_double(p.x) << " " << format_double(p.y) << "\n";
    }
    return out.str();
}

BlendBasis basis_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto next_line = [&]() {
        if (!std::getline(in, line))
            throw FormatError("blend basis: truncated at line " + std::to_string(lineno));
        ++lineno;
        return split_ws(line);
    };
    auto tok = next_line();
    if (tok.size() != 2 || tok[0] != "blend-basis" || tok[1] != "1")
        throw FormatError("blend basis: bad or unsupported header");
    tok = next_line();
    if (tok.size() != 2 || tok[0] != "points" || std::stoi(tok[1]) != kNumLandmarks)
        throw FormatError("blend basis: expected 63 points");
    tok = next_line();
    if (tok.size() != 2 || tok[0] != "shapes" || std::stoi(tok[1]) != kNumCoeffs)
        throw FormatError("blend basis: expected 52 shapes");
    tok = next_line();
    if (tok.size() != 1 || tok[0] != "neutral")
        throw FormatError("blend basis: expected 'neutral' block");

    BlendBasis basis;
    auto read_points = [&](Landmarks& dst) {
        dst.resize(kNumLandmarks);
        for (int i = 0; i < kNumLandmarks; ++i) {
            tok = next_line();
            if (tok.size() != 2)
                throw FormatError("blend basis line " + std::to_string(lineno) +
                                  ": expected two numbers");
            dst[i] = {parse_double(tok[0]), parse_double(tok[1])};
        }
    };
    read_points(basis.neutral);
    basis.deltas.resize(kNumCoeffs);
    for (int s = 0; s < kNumCoeffs; ++s) {
        tok = next_line();
        if (tok.size() != 3 || tok[0] != "shape" || std::stoi(tok[1]) != s)
            throw FormatError("blend basis line " + std::to_string(lineno) +
                              ": expected 'shape " + std::to_string(s) + "'");
        if (tok[2] != blendshape_names()[s])
            throw FormatError("blend basis: shape " + std::to_string(s) +
                              " name mismatch: " + tok[2]);
        read_points(basis.deltas[s]);
    }
    basis.validate();
    return basis;
}

void save_basis(const BlendBasis& basis, const std::string& path) {
    write_file_atomic(path, basis_to_text(basis));
}

BlendBasis load_basis(const std::string& path) {
    return basis_from_text(read_file(path));
}

// ---------------------------------------------------------------------------
// FaceSim
// ---------------------------------------------------------------------------

namespace {

// Dominant servo channels per blendshape coefficient (same order as
// blendshape_names()). Cross terms are drawn from the rest of the region.
const std::array<std::vector<int>, kNumCoeffs>& dominant_servos() {
    using namespace servo;
    static const std::array<std::vector<int>, kNumCoeffs> map = {{
        {kBrowFrownL},          // browDownLeft
        {kBrowFrownR},          // browDownRight
        {kBrowRaiseL, kBrowRaiseR},  // browInnerUp
        {kBrowRaiseL},          // browOuterUpLeft
        {kBrowRaiseR},          // browOuterUpRight
        {kJawL, kJawR},         // cheekPuff
        {kEyeOpenL},            // cheekSquintLeft
        {kEyeOpenR},            // cheekSquintRight
        {kBlinkL},              // eyeBlinkLeft
        {kBlinkR},              // eyeBlinkRight
        {kEyeVertL},            // eyeLookDownLeft
        {kEyeVertR},            // eyeLookDownRight
        {kEyeHorizL},           // eyeLookInLeft
        {kEyeHorizR},           // eyeLookInRight
        {kEyeHorizL},           // eyeLookOutLeft
        {kEyeHorizR},           // eyeLookOutRight
        {kEyeVertL},            // eyeLookUpLeft
        {kEyeVertR},            // eyeLookUpRight
        {kEyeOpenL},            // eyeSquintLeft
        {kEyeOpenR},            // eyeSquintRight
        {kEyeOpenL},            // eyeWideLeft
        {kEyeOpenR},            // eyeWideRight
        {kJawL, kJawR},         // jawForward
        {kJawL},                // jawLeft
        {kJawL, kJawR},         // jawOpen
        {kJawR},                // jawRight
        {kJawL, kJawR},         // mouthClose
        {kCornerUpL},           // mouthDimpleLeft
        {kCornerUpR},           // mouthDimpleRight
        {kSadL},                // mouthFrownLeft
        {kSadR},                // mouthFrownRight
        {kUpperLipL, kLowerLipL},  // mouthFunnel
        {kCornerUpL},           // mouthLeft
        {kLowerLipL},           // mouthLowerDownLeft
        {kLowerLipR},           // mouthLowerDownRight
        {kUpperLipL},           // mouthPressLeft
        {kUpperLipR},           // mouthPressRight
        {kUpperLipR, kLowerLipR},  // mouthPucker
        {kCornerUpR},           // mouthRight
        {kLowerLipL, kLowerLipR},  // mouthRollLower
        {kUpperLipL, kUpperLipR},  // mouthRollUpper
        {kLowerLipL, kLowerLipR},  // mouthShrugLower
        {kUpperLipL, kUpperLipR},  // mouthShrugUpper
        {kSmileL},              // mouthSmileLeft
        {kSmileR},              // mouthSmileRight
        {kSadL},                // mouthStretchLeft
        {kSadR},                // mouthStretchRight
        {kUpperLipL},           // mouthUpperUpLeft
        {kUpperLipR},           // mouthUpperUpRight
        {kUpperLipL},           // noseSneerLeft
        {kUpperLipR},           // noseSneerRight
        {kJawL, kJawR},         // tongueOut
    }};
    return map;
}

// Saturating response: the logistic rescaled so that s(0) = 0 and
// s(z) -> 1 as z -> +inf.
double saturate(double z) {
    return 2.0 / (1.0 + std::exp(-z)) - 1.0;
}

}  // namespace

FaceSim FaceSim::make(std::uint64_t seed, double noise_sigma) {
    if (noise_sigma < 0.0) throw ArgumentError("noise_sigma must be >= 0");
    FaceSim sim;
    sim.seed = seed;
    sim.noise_sigma = noise_sigma;

    const ServoLayout layout = make_default_layout();
    // Region pools for cross terms.
    std::array<std::vector<int>, 5> region_pool;
    for (int s = 0; s < kNumServos; ++s)
        region_pool[static_cast<int>(layout.channels[s].region)].push_back(s);

    for (int j = 0; j < kNumCoeffs; ++j) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
        const auto& dom = dominant_servos()[j];
        std::set<int> used(dom.begin(), dom.end());
        for (int s : dom)
            sim.coeff_map[j].push_back({s, rng.uniform(0.5, 1.5)});
        const auto& pool = region_pool[static_cast<int>(layout.channels[dom[0]].region)];
        for (int attempt = 0; attempt < 3; ++attempt) {
            int pick = pool[rng.next_below(pool.size())];
            if (used.count(pick)) continue;
            used.insert(pick);
            sim.coeff_map[j].push_back({pick, rng.uniform(-0.2, 0.2)});
        }
        sim.rest[j] = rng.uniform(0.2, 0.3);
        sim.span[j] = rng.uniform(0.5, 0.6);
    }
    return sim;
}

int FaceSim::primary_feature_of_servo(int servo_index) const {
    for (int j = 0; j < kNumCoeffs; ++j)
        if (!coeff_map[j].empty() && coeff_map[j][0].servo == servo_index)
            return j;
    for (int j = 0; j < kNumCoeffs; ++j)
        for (const auto& e : coeff_map[j])
            if (e.servo == servo_index && e.weight >= 0.5) return j;
    return -1;
}

FeatureVector servo_to_features(const FaceSim& sim, const ServoFrame& frame) {
    if (frame.size() != static_cast<std::size_t>(kNumServos))
        throw DimensionError("servo frame must have 25 values, got " +
                             std::to_string(frame.size()));
    FeatureVector fv;
    for (int j = 0; j < kNumCoeffs; ++j) {
        double z = 0.0;
        for (const auto& e : sim.coeff_map[j]) z += e.weight * frame[e.servo];
        fv.values[j] = sim.rest[j] + sim.span[j] * saturate(z);
    }
    // Single head DoF drives yaw affinely; pitch and roll stay at rest.
    fv.pose(0) = 0.5 + 0.5 * frame[servo::kHeadYaw];
    fv.pose(1) = 0.5;
    fv.pose(2) = 0.5;
    return fv;
}

FeatureVector add_observation_noise(const FeatureVector& fv, double sigma,
                                    std::uint64_t seed) {
    if (sigma < 0.0) throw ArgumentError("noise sigma must be >= 0");
    if (fv.values.size() != static_cast<std::size_t>(kNumFeatures))
        throw DimensionError("feature vector must have 55 values");
    if (sigma == 0.0) return fv;
    FeatureVector out = fv;
    SplitMix64 rng(seed);
    for (double& v : out.values)
        v = std::clamp(v + sigma * rng.gaussian(), 0.0, 1.0);
    return out;
}

Landmarks compose_landmarks(const FeatureVector& fv, const BlendBasis& basis) {
    if (fv.values.size() != static_cast<std::size_t>(kNumFeatures))
        throw DimensionError("feature vector must have 55 values");
    basis.validate();
    Landmarks out = basis.neutral;
    for (int s = 0; s < kNumCoeffs; ++s) {
        const double w = fv.coeff(s);
        const auto& d = basis.deltas[s];
        for (int i = 0; i < kNumLandmarks; ++i) {
            out[i].x += w * d[i].x;
            out[i].y += w * d[i].y;
        }
    }
    const double yaw = (fv.pose(0) - 0.5) * 2.0 * kMaxYawRadians;
    if (yaw != 0.0) {
        double cx = 0.0, cy = 0.0;
        for (const auto& p : out) {
            cx += p.x;
            cy += p.y;
        }
        cx /= kNumLandmarks;
        cy /= kNumLandmarks;
        const double c = std::cos(yaw), s = std::sin(yaw);
        for (auto& p : out) {
            const double dx = p.x - cx, dy = p.y - cy;
            p.x = cx + c * dx - s * dy;
            p.y = cy + s * dx + c * dy;
        }
    }
    return out;
}

Landmarks add_landmark_noise(const Landmarks& lm, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw ArgumentError("noise sigma must be >= 0");
    if (sigma == 0.0) return lm;
    Landmarks out = lm;
    SplitMix64 rng(seed);
    for (auto& p : out) {
        p.x = std::clamp(p.x + sigma * rng.gaussian(), 0.0, 1.0);
        p.y = std::clamp(p.y + sigma * rng.gaussian(), 0.0, 1.0);
    }
    return out;
}

Image render_image(const Landmarks& landmarks) {
    if (landmarks.size() != static_cast<std::size_t>(kNumLandmarks))
        throw DimensionError("render_image expects 63 landmarks");
    for (const auto& p : landmarks)
        if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
            throw ArgumentError("landmark outside [0,1]^2");

    Image img = Image::filled(640, 480, 210, 210, 210);
    auto px = [&](const Point2& p) {
        return std::make_pair(static_cast<int>(std::lround(p.y * 479.0)),
                              static_cast<int>(std::lround(p.x * 639.0)));
    };
    auto polyline = [&](int lo, int hi, bool closed, std::uint8_t r, std::uint8_t g,
                        std::uint8_t bcol) {
        for (int i = lo; i < hi; ++i) {
            auto [y0, x0] = px(landmarks[i]);
            auto [y1, x1] = px(landmarks[i + 1]);
            img.draw_line(y0, x0, y1, x1, r, g, bcol);
        }
        if (closed) {
            auto [y0, x0] = px(landmarks[hi]);
            auto [y1, x1] = px(landmarks[lo]);
            img.draw_line(y0, x0, y1, x1, r, g, bcol);
        }
    };
    polyline(0, 12, false, 70, 60, 50);     // outline
    polyline(13, 17, false, 90, 60, 30);    // left brow
    polyline(18, 22, false, 90, 60, 30);    // right brow
    polyline(23, 28, true, 30, 50, 120);    // left eye
    polyline(29, 34, true, 30, 50, 120);    // right eye
    polyline(35, 38, false, 100, 90, 80);   // nose bridge
    polyline(39, 42, false, 100, 90, 80);   // nose base
    polyline(43, 54, true, 150, 40, 50);    // outer lip
    polyline(55, 62, true, 150, 40, 50);    // inner lip
    for (const auto& p : landmarks) {
        auto [y, x] = px(p);
        img.set_pixel(y, x, 20, 20, 20);
        img.set_pixel(y, x + 1, 20, 20, 20);
        img.set_pixel(y + 1, x, 20, 20, 20);
        img.set_pixel(y + 1, x + 1, 20, 20, 20);
    }
    return img;
}

}  // namespace mimic
