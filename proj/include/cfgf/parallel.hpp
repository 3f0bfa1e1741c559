#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "cfgf/errors.hpp"

namespace cfgf {

// Runs fn(i) for i in [0, count) across `threads` workers.  Worker j handles
// the strided slice j, j+T, j+2T, ...  Callers make determinism trivial by
// writing results into slot i of a preallocated buffer: the outcome is then
// bit-identical for every thread count.  The first exception thrown by any
// worker is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
    if (count < 0) throw ParamError("parallel_for: negative count");
    if (threads < 1) throw ParamError("parallel_for: threads must be >= 1");
    if (threads == 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const int workers = static_cast<int>(
        std::min<std::int64_t>(threads, count));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int j = 0; j < workers; ++j) {
        pool.emplace_back([&, j] {
            try {
                for (std::int64_t i = j; i < count; i += workers) fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cfgf
