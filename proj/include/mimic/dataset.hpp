#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mimic/servo_layout.hpp"

namespace mimic {

struct DatasetRecord {
    std::uint64_t index = 0;
    ServoFrame servo;               // 25 values
    std::vector<double> features;   // 55 values
    std::vector<double> landmarks;  // 126 values (x0,y0,x1,y1,...) or empty
};

// In-memory dataset plus the generation provenance stored in the file
// header. Record i is a pure function of (base_seed, i) and the simulator.
struct Dataset {
    int format = 1;
    std::uint64_t base_seed = 0;
    std::uint64_t sim_seed = 0;
    double noise_sigma = 0.0;
    std::vector<DatasetRecord> records;

    std::size_t size() const { return records.size(); }
    bool has_landmarks() const {
        return !records.empty() && !records.front().landmarks.empty();
    }
    // Dense unique indices, all values in [0,1]; throws IntegrityError
    // naming the offending record.
    void validate() const;
};

// JSON-Lines: one header object, then one record object per line. Numbers
// are serialized with 17 significant digits, so round trips are value-exact.
std::string dataset_to_jsonl(const Dataset& ds);
Dataset dataset_from_jsonl(const std::string& text);

void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

// Seeded shuffle then partition into disjoint train/test subsets.
std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, int train_n, int test_n,
                                          std::uint64_t seed);

}  // namespace mimic
