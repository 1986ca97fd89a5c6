#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ratchetlab {

/// Resolves a thread-count request: explicit value > 0 wins, then the
/// RATCHETLAB_THREADS environment variable, then hardware concurrency.
unsigned resolve_threads(int requested = 0);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
/// Work items must be independent; results must be written to
/// caller-provided slots so the outcome does not depend on scheduling.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& fn) {
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (threads > count) threads = static_cast<unsigned>(count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace ratchetlab
