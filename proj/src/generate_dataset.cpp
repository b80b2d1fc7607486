#include "mimic/dataset_gen.hpp"

#include "mimic/rng.hpp"
#include "mimic/worker_pool.hpp"

namespace mimic {

DatasetRecord generate_record(const PolicyConfig& config, std::uint64_t index,
                              const FaceSim& sim, const ServoLayout& layout,
                              const BlendBasis* basis) {
    DatasetRecord r;
    r.index = index;
    r.servo = sample_expression(config, index, layout);

    const FeatureVector clean = servo_to_features(sim, r.servo);
    const std::uint64_t record_seed = derive_seed(config.base_seed, index);
    const FeatureVector noisy = add_observation_noise(
        clean, sim.noise_sigma, derive_seed(record_seed, seed_tag::kNoise));
    r.features = noisy.values;

    if (basis) {
        // Landmarks carry their own observation jitter, like the key-point
        // head of a real extractor.
        Landmarks lm = compose_landmarks(clean, *basis);
        lm = add_landmark_noise(lm, sim.noise_sigma,
                                derive_seed(record_seed, seed_tag::kLandmarkNoise));
        r.landmarks.reserve(2 * kNumLandmarks);
        for (const auto& p : lm) {
            r.landmarks.push_back(p.x);
            r.landmarks.push_back(p.y);
        }
    }
    return r;
}

Dataset generate_dataset(const PolicyConfig& config, int n, const FaceSim& sim,
                         const ServoLayout& layout, const BlendBasis* basis) {
    if (n < 1) throw ArgumentError("dataset size must be >= 1");
    config.validate(layout);
    Dataset ds;
    ds.base_seed = config.base_seed;
    ds.sim_seed = sim.seed;
    ds.noise_sigma = sim.noise_sigma;
    ds.records.resize(n);
    // records are pure per index, so workers fill disjoint slices
    parallel_chunks(static_cast<std::size_t>(n), kDefaultChunkSize,
                    [&](std::size_t lo, std::size_t hi, std::size_t) {
                        for (std::size_t i = lo; i < hi; ++i)
                            ds.records[i] = generate_record(config, i, sim, layout, basis);
                    });
    return ds;
}

}  // namespace mimic
