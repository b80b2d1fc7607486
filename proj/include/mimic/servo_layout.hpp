#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace mimic {

inline constexpr int kNumServos = 25;

// Normalized servo command frame: 25 values in [0,1], channel order fixed
// by ServoLayout. Neutral is the all-zeros frame.
using ServoFrame = std::vector<double>;

enum class Region { Eye, Eyelid, Brow, Head, Mouth };

std::string region_name(Region r);
Region region_from_name(const std::string& s);

struct ServoChannel {
    std::string name;
    Region region = Region::Eye;
    double lo = 0.0;  // limit interval [lo, hi] within [0,1]
    double hi = 1.0;
};

// Canonical channel indices. The layout is a design choice of this
// artifact; the rule set below depends on it.
namespace servo {
inline constexpr int kEyeHorizL = 0;
inline constexpr int kEyeHorizR = 1;
inline constexpr int kEyeVertL = 2;
inline constexpr int kEyeVertR = 3;
inline constexpr int kBlinkL = 4;
inline constexpr int kBlinkR = 5;
inline constexpr int kEyeOpenL = 6;
inline constexpr int kEyeOpenR = 7;
inline constexpr int kBrowRaiseL = 8;
inline constexpr int kBrowRaiseR = 9;
inline constexpr int kBrowFrownL = 10;
inline constexpr int kBrowFrownR = 11;
inline constexpr int kHeadYaw = 12;
inline constexpr int kUpperLipL = 13;
inline constexpr int kUpperLipR = 14;
inline constexpr int kLowerLipL = 15;
inline constexpr int kLowerLipR = 16;
inline constexpr int kSmileL = 17;
inline constexpr int kSmileR = 18;
inline constexpr int kSadL = 19;
inline constexpr int kSadR = 20;
inline constexpr int kCornerUpL = 21;
inline constexpr int kCornerUpR = 22;
inline constexpr int kJawL = 23;
inline constexpr int kJawR = 24;
}  // namespace servo

enum class RuleKind { Sync, Exclusion, Free };

// One validator rule. Sync rules require |left-right| <= tol for each pair.
// Exclusion rules allow at most one of their channel groups to be active
// (any channel above the activation threshold) and additionally require the
// pairs in sync_within to stay synchronized. Free rules impose nothing.
struct ConstraintRule {
    int id = 0;  // 1-based rule id
    RuleKind kind = RuleKind::Sync;
    std::vector<std::pair<int, int>> pairs;           // Sync
    std::vector<std::vector<int>> groups;             // Exclusion
    std::vector<std::pair<int, int>> sync_within;     // Exclusion
    std::vector<int> channels;                        // Free
};

struct ServoLayout {
    std::vector<ServoChannel> channels;               // exactly 25
    std::vector<std::pair<int, int>> sym_pairs;       // (left, right)
    std::vector<std::vector<int>> couplings;          // move-together groups
    std::vector<ConstraintRule> rules;                // the 7 validator rules
    double activation_threshold = 0.05;               // "active" = value > this

    int count_region(Region r) const;
    // Throws ArgumentError if any structural invariant is violated.
    void validate() const;
};

ServoLayout make_default_layout();

// Clamps every value into its channel's limit interval.
ServoFrame clamp_frame(const ServoFrame& frame, const ServoLayout& layout);

// Returns the ids of violated rules (empty means the frame is valid).
std::vector<int> check_constraints(const ServoFrame& frame, const ServoLayout& layout,
                                   double tol);

// Sync tolerance defaults: generated data is exact, model output is not.
inline constexpr double kGenSyncTol = 1e-6;
inline constexpr double kEvalSyncTol = 0.02;

// UTF-8 text serialization so alternate layouts can be tested.
std::string layout_to_text(const ServoLayout& layout);
ServoLayout layout_from_text(const std::string& text);

void save_layout(const ServoLayout& layout, const std::string& path);
ServoLayout load_layout(const std::string& path);

}  // namespace mimic
