#pragma once

#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "skidsim/errors.hpp"

namespace skidsim {

// Thread budget for grid evaluations. Precedence: explicit request, then the
// SKIDSIM_THREADS environment variable, then hardware concurrency. 0 means auto.
inline std::size_t resolve_thread_count(std::optional<long> requested = std::nullopt) {
    long n = requested.value_or(0);
    if (n == 0) {
        if (const char* env = std::getenv("SKIDSIM_THREADS")) {
            const std::string text(env);
            if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
                throw SkidError(ErrorCode::InvalidParams, "SKIDSIM_THREADS",
                                "SKIDSIM_THREADS must be a non-negative integer");
            n = std::stol(text);
        }
    }
    if (n < 0)
        throw SkidError(ErrorCode::InvalidParams, "threads", "thread count must be non-negative");
    if (n == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        n = hw == 0 ? 1 : static_cast<long>(hw);
    }
    return static_cast<std::size_t>(n);
}

// Run fn(i) for i in [0, count) on up to `threads` workers, block-partitioned.
// Output ordering is the caller's concern: workers write to disjoint indices only.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace skidsim
