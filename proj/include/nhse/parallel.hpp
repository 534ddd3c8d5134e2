#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nhse {

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Evaluate f(0..count-1) on up to `workers` threads. Results are stored by
/// index, so their order never depends on completion order. The first
/// exception thrown by any task is rethrown after all workers join.
template <class T>
std::vector<T> parallel_map(std::size_t count, unsigned workers, const std::function<T(std::size_t)>& f) {
    std::vector<T> out(count);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        out[i] = f(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                    }
                }
            });
        }
    }
    if (error)
        std::rethrow_exception(error);
    return out;
}

} // namespace nhse
