#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace mf {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Run fn(first, last) over [0, count) split into contiguous chunks across
// workers. Chunk boundaries are independent of the worker count so that any
// per-chunk accumulation stays deterministic.
inline void parallel_chunks(long count, long chunk, int workers,
                            const std::function<void(long, long)>& fn) {
    workers = resolve_workers(workers);
    if (workers <= 1 || count <= chunk) {
        for (long s = 0; s < count; s += chunk) fn(s, std::min(count, s + chunk));
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<long> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const long s = next.fetch_add(chunk);
                if (s >= count) return;
                fn(s, std::min(count, s + chunk));
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace mf
