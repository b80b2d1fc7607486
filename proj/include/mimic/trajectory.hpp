#pragma once

#include <vector>

#include "mimic/errors.hpp"

namespace mimic {

// Fixed-rate sequence of frames (servo commands or feature vectors); all
// frames must share one dimensionality.
struct Trajectory {
    std::vector<std::vector<double>> frames;
    double rate_hz = 30.0;

    void validate() const {
        if (frames.empty()) throw ArgumentError("trajectory must be non-empty");
        if (rate_hz <= 0.0) throw ArgumentError("trajectory rate must be positive");
        const std::size_t dim = frames.front().size();
        for (const auto& f : frames)
            if (f.size() != dim)
                throw DimensionError("trajectory frames have mixed dimensionality");
    }

    std::size_t length() const { return frames.size(); }
    std::size_t dim() const { return frames.empty() ? 0 : frames.front().size(); }
};

inline constexpr double kFrameRateHz = 30.0;

}  // namespace mimic
