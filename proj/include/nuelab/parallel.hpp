#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nuelab {

// Static-chunk parallel loop. Work items must be independent and write only
// to their own index slots; results are then identical for any thread count.
// The first worker exception is rethrown in the caller.
inline void parallel_for(int64_t begin, int64_t end, int threads,
                         const std::function<void(int64_t)>& body) {
    const int64_t n = end - begin;
    if (n <= 0) return;
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (threads == 1 || n == 1) {
        for (int64_t i = begin; i < end; ++i) body(i);
        return;
    }
    const int64_t workers = std::min<int64_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int64_t w = 0; w < workers; ++w) {
        const int64_t lo = begin + n * w / workers;
        const int64_t hi = begin + n * (w + 1) / workers;
        pool.emplace_back([lo, hi, &body, &first_error, &error_mutex] {
            try {
                for (int64_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace nuelab
