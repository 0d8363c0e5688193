#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace jamrx {

inline int resolve_workers(int hint) {
    if (hint > 0) {
        return hint;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run fn(i) for i in [0, n) on `workers` threads. Work items are claimed
/// through an atomic counter, so the assignment of items to threads is
/// schedule-dependent -- callers must write results into per-index slots and
/// reduce in index order to stay reproducible.
template <typename F>
void parallel_for(std::size_t n, int workers, F&& fn) {
    workers = resolve_workers(workers);
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min(static_cast<std::size_t>(workers), n);
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back(body);
    }
    for (auto& th : pool) {
        th.join();
    }
}

}  // namespace jamrx
