#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace glance {

/// Worker cap: GLANCE_THREADS when set, else hardware concurrency.
inline int worker_count(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GLANCE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Index-parallel loop with deterministic work assignment (block cyclic by
/// index, results written to caller-owned slots).
inline void parallel_for(int n, const std::function<void(int)>& body, int threads = 0) {
    const int workers = std::min(worker_count(threads), n > 0 ? n : 1);
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (int i = w; i < n; i += workers) body(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace glance
