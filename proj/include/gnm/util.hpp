// util.hpp — small shared helpers: uniform grids and a deterministic
// parallel loop (each task writes only its own slot, so results do not
// depend on the thread count).

#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "gnm/errors.hpp"

namespace gnm {

/// n equally spaced samples covering [a, b] inclusive.
inline std::vector<double> linspace(double a, double b, int n) {
    if (n < 2) throw DomainError("linspace: need at least 2 samples");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double step = (b - a) / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + step * i;
    out.back() = b;
    return out;
}

/// Run body(i) for i in [0, n) on up to `threads` workers.
inline void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (n <= 0) return;
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gnm
