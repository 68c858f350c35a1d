#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cubehom {

/// Runs body(block) for every block in [0, num_blocks) on up to `threads`
/// workers. Blocks are claimed dynamically; callers write results into
/// per-block slots and merge them in block order, so output never depends on
/// the worker count. The first exception thrown by a body is rethrown.
template <class Body>
void parallel_blocks(std::size_t num_blocks, unsigned threads, Body&& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, threads), num_blocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < num_blocks; ++b) body(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= num_blocks) return;
            try {
                body(b);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(num_blocks);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace cubehom
