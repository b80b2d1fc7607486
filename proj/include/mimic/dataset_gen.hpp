#pragma once

#include "mimic/dataset.hpp"
#include "mimic/expert_policy.hpp"
#include "mimic/face_sim.hpp"

namespace mimic {

// One dataset record as a pure function of (config.base_seed, index) and the
// simulator; records can be generated in any order or in parallel.
DatasetRecord generate_record(const PolicyConfig& config, std::uint64_t index,
                              const FaceSim& sim, const ServoLayout& layout,
                              const BlendBasis* basis = nullptr);

// n records pairing sampled servo frames with simulated observations.
// Landmarks are stored only when a blend basis is supplied.
Dataset generate_dataset(const PolicyConfig& config, int n, const FaceSim& sim,
                         const ServoLayout& layout, const BlendBasis* basis = nullptr);

}  // namespace mimic
