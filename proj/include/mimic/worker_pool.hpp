#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace mimic {

// Worker count for fan-out sections: MIMIC_WORKERS when set, otherwise the
// hardware concurrency. This is the only environment override the pipeline
// honors.
inline int worker_count() {
    if (const char* env = std::getenv("MIMIC_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(begin, end, chunk_index) over [0, n) in fixed-size chunks. The
// chunk grid is independent of the worker count, so per-chunk partial
// results merged in chunk order give bit-identical output for any number of
// workers.
inline void parallel_chunks(std::size_t n, std::size_t chunk_size,
                            const std::function<void(std::size_t, std::size_t,
                                                     std::size_t)>& fn,
                            int workers = worker_count()) {
    if (n == 0) return;
    const std::size_t num_chunks = (n + chunk_size - 1) / chunk_size;
    if (workers <= 1 || num_chunks <= 1) {
        for (std::size_t c = 0; c < num_chunks; ++c)
            fn(c * chunk_size, std::min(n, (c + 1) * chunk_size), c);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t c = next.fetch_add(1); c < num_chunks; c = next.fetch_add(1))
            fn(c * chunk_size, std::min(n, (c + 1) * chunk_size), c);
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(workers), num_chunks));
    pool.reserve(spawn - 1);
    for (int t = 1; t < spawn; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

inline constexpr std::size_t kDefaultChunkSize = 64;

}  // namespace mimic
