#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace tdon {

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Callers must write
/// results into per-index slots; combining those slots in index order keeps
/// every reduction deterministic regardless of the worker count.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t thread_count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += thread_count) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace tdon
