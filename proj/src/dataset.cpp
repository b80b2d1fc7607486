#include "mimic/dataset.hpp"

#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mimic/errors.hpp"
#include "mimic/face_sim.hpp"
#include "mimic/rng.hpp"
#include "mimic/text_io.hpp"

namespace mimic {

void Dataset::validate() const {
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.index != i)
            throw IntegrityError("dataset record " + std::to_string(i) +
                                 " has index " + std::to_string(r.index) +
                                 " (indices must be dense)");
        if (r.servo.size() != static_cast<std::size_t>(kNumServos))
            throw IntegrityError("dataset record " + std::to_string(i) +
                                 ": servo frame is not 25-dimensional");
        if (r.features.size() != static_cast<std::size_t>(kNumFeatures))
            throw IntegrityError("dataset record " + std::to_string(i) +
                                 ": feature vector is not 55-dimensional");
        if (!r.landmarks.empty() &&
            r.landmarks.size() != static_cast<std::size_t>(2 * kNumLandmarks))
            throw IntegrityError("dataset record " + std::to_string(i) +
                                 ": landmarks must have 126 values");
        auto in_range = [](const std::vector<double>& v) {
            for (double x : v)
                if (!(x >= 0.0 && x <= 1.0)) return false;
            return true;
        };
        if (!in_range(r.servo) || !in_range(r.features) || !in_range(r.landmarks))
            throw IntegrityError("dataset record " + std::to_string(i) +
                                 ": value outside [0,1]");
    }
}

namespace {

void append_array(std::ostringstream& out, const char* key,
                  const std::vector<double>& v) {
    out << "\"" << key << "\":[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ",";
        out << format_double(v[i]);
    }
    out << "]";
}

std::vector<double> read_array(const nlohmann::json& j, const char* key,
                               std::size_t expected, int lineno) {
    if (!j.contains(key) || !j[key].is_array())
        throw FormatError("dataset line " + std::to_string(lineno) + ": missing array '" +
                          key + "'");
    std::vector<double> out;
    out.reserve(j[key].size());
    for (const auto& x : j[key]) {
        if (!x.is_number())
            throw FormatError("dataset line " + std::to_string(lineno) +
                              ": non-numeric entry in '" + key + "'");
        out.push_back(x.get<double>());
    }
    if (expected != 0 && out.size() != expected)
        throw FormatError("dataset line " + std::to_string(lineno) + ": '" + key +
                          "' must have " + std::to_string(expected) + " entries");
    return out;
}

}  // namespace

std::string dataset_to_jsonl(const Dataset& ds) {
    std::ostringstream out;
    out << "{\"format\":" << ds.format << ",\"base_seed\":" << ds.base_seed
        << ",\"sim_seed\":" << ds.sim_seed
        << ",\"noise_sigma\":" << format_double(ds.noise_sigma)
        << ",\"count\":" << ds.records.size() << "}\n";
    for (const auto& r : ds.records) {
        out << "{\"index\":" << r.index << ",";
        append_array(out, "servo", r.servo);
        out << ",";
        append_array(out, "features", r.features);
        if (!r.landmarks.empty()) {
            out << ",";
            append_array(out, "landmarks", r.landmarks);
        }
        out << "}\n";
    }
    return out.str();
}

Dataset dataset_from_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto parse_line = [&](const std::string& s) {
        nlohmann::json j = nlohmann::json::parse(s, nullptr, false);
        if (j.is_discarded())
            throw FormatError("dataset line " + std::to_string(lineno) +
                              ": malformed JSON");
        return j;
    };

    if (!std::getline(in, line)) throw FormatError("dataset: empty file");
    ++lineno;
    nlohmann::json header = parse_line(line);
    Dataset ds;
    if (!header.contains("format") || !header["format"].is_number_integer())
        throw FormatError("dataset header: missing 'format'");
    ds.format = header["format"].get<int>();
    if (ds.format != 1)
        throw FormatError("dataset header: unsupported format " +
                          std::to_string(ds.format));
    for (const char* key : {"base_seed", "sim_seed", "noise_sigma", "count"})
        if (!header.contains(key))
            throw FormatError(std::string("dataset header: missing '") + key + "'");
    ds.base_seed = header["base_seed"].get<std::uint64_t>();
    ds.sim_seed = header["sim_seed"].get<std::uint64_t>();
    ds.noise_sigma = header["noise_sigma"].get<double>();
    const std::uint64_t count = header["count"].get<std::uint64_t>();

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = parse_line(line);
        DatasetRecord r;
        if (!j.contains("index") || !j["index"].is_number_unsigned())
            throw FormatError("dataset line " + std::to_string(lineno) +
                              ": missing 'index'");
        r.index = j["index"].get<std::uint64_t>();
        r.servo = read_array(j, "servo", kNumServos, lineno);
        r.features = read_array(j, "features", kNumFeatures, lineno);
        if (j.contains("landmarks"))
            r.landmarks = read_array(j, "landmarks", 2 * kNumLandmarks, lineno);
        ds.records.push_back(std::move(r));
    }
    if (ds.records.size() != count)
        throw IntegrityError("dataset: header declares " + std::to_string(count) +
                             " records but file has " +
                             std::to_string(ds.records.size()));
    ds.validate();
    return ds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
    write_file_atomic(path, dataset_to_jsonl(ds));
}

Dataset load_dataset(const std::string& path) {
    return dataset_from_jsonl(read_file(path));
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, int train_n, int test_n,
                                          std::uint64_t seed) {
    if (train_n < 0 || test_n < 0)
        throw ArgumentError("split sizes must be non-negative");
    if (static_cast<std::size_t>(train_n) + static_cast<std::size_t>(test_n) >
        ds.records.size())
        throw ArgumentError("split oversubscribed: " + std::to_string(train_n) + "+" +
                            std::to_string(test_n) + " > " +
                            std::to_string(ds.records.size()));
    std::vector<std::size_t> idx(ds.records.size());
    std::iota(idx.begin(), idx.end(), 0);
    SplitMix64 rng(derive_seed(seed, seed_tag::kSplit));
    for (std::size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[rng.next_below(i)]);

    auto take = [&](std::size_t lo, std::size_t n) {
        Dataset out;
        out.format = ds.format;
        out.base_seed = ds.base_seed;
        out.sim_seed = ds.sim_seed;
        out.noise_sigma = ds.noise_sigma;
        out.records.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            DatasetRecord r = ds.records[idx[lo + k]];
            r.index = k;  // re-densify for the subset
            out.records.push_back(std::move(r));
        }
        return out;
    };
    return {take(0, train_n), take(train_n, test_n)};
}

}  // namespace mimic
