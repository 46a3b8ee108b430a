#pragma once

// Minimal chunked parallel_for with a process-wide thread count. Results are
// written to preallocated slots indexed by the loop variable, so outputs do
// not depend on the number of threads.

#include <algorithm>
#include <thread>
#include <vector>

namespace angular {

inline int& global_thread_count() {
    static int count = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return count;
}

template <typename F>
void parallel_for(long n, F&& body) {
    int threads = std::min<long>(global_thread_count(), n);
    if (threads <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (long i = t; i < n; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace angular
