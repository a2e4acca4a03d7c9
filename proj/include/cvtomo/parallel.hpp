#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cvtomo {

/// Worker count: CVTOMO_THREADS env var if set, else hardware concurrency.
inline int default_thread_count() {
    if (const char* env = std::getenv("CVTOMO_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

/// Index-parallel loop; results must be written to per-index slots so the
/// outcome is independent of scheduling.
inline void parallel_for(int count, const std::function<void(int)>& body,
                         int threads = 0) {
    if (threads <= 0) threads = default_thread_count();
    if (threads == 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= count) break;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    int spawn = std::min(threads, count);
    pool.reserve(size_t(spawn));
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace cvtomo
