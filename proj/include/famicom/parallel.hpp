#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace famicom {

/// Runs fn(i) for i in [0, n) with at most max_inflight workers and returns
/// results in index order. The first exception thrown by any item is
/// rethrown after all workers join.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F fn, int max_inflight) {
    std::vector<std::optional<R>> slots(n);
    if (max_inflight <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) slots[i] = fn(i);
    } else {
        const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(max_inflight), n);
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n) return;
                    try {
                        slots[i] = fn(i);
                    } catch (...) {
                        errors[w] = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    std::vector<R> out;
    out.reserve(n);
    for (std::optional<R>& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace famicom
