#ifndef GRAPHLOG_PARALLEL_HPP
#define GRAPHLOG_PARALLEL_HPP

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace graphlog {

// Worker cap: GRAPHLOG_THREADS if set to a positive integer, else hardware
// concurrency. Parallel results always land in per-index slots and are merged
// in a fixed order, so the cap never changes any output byte.
inline unsigned worker_cap() {
    if (const char* env = std::getenv("GRAPHLOG_THREADS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs fn(i) for i in [0, n) on up to worker_cap() threads. fn must only
// write to storage owned by index i.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    unsigned workers = worker_cap();
    if (n <= 1 || workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace graphlog

#endif
